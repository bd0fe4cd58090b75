//! End-to-end analysis: ingest, IE transform, fits, chained prediction,
//! report and plot-data files.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::chain::{accuracy_score, build_chain_with, predict_gdp, predict_ie_gdppc_phased};
use crate::config::{Analysis, AnalysisConfig};
use crate::error::{Error, ErrorKind};
use crate::ie::ie_transform;
use crate::ingest::{assemble_dataset, Dataset, Manifest, Role};
use crate::regress::{fit_elasticity_with, fit_growth_with, GrowthFit};
use crate::report::{fmt_num, Prediction, Report, SeriesGrowth, FULL_WINDOW};
use crate::series::{IESeries, Phase};

pub const REPORT_FILE: &str = "report.json";

/// The (response, predictor) pairs reported as elasticities.
pub const ELASTICITY_PAIRS: [(Role, Role); 3] = [
    (Role::GdpPerCapita, Role::Productivity),
    (Role::Wages, Role::Productivity),
    (Role::Productivity, Role::Investment),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Transform,
    Growth,
    Elasticity,
    Chain,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Transform => "transform",
            Stage::Growth => "growth",
            Stage::Elasticity => "elasticity",
            Stage::Chain => "chain",
            Stage::Output => "output",
        })
    }
}

/// A failure tagged with the stage and, where known, the series role.
#[derive(Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub role: Option<Role>,
    pub error: Error,
}

impl PipelineError {
    fn new(stage: Stage, role: Option<Role>) -> impl FnOnce(Error) -> Self {
        move |error| Self { stage, role, error }
    }

    pub fn kind(&self) -> ErrorKind {
        self.error.kind()
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage", self.stage)?;
        if let Some(role) = self.role {
            write!(f, " ({role})")?;
        }
        write!(f, ": {}", self.error)
    }
}

impl std::error::Error for PipelineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

type Result<T> = std::result::Result<T, PipelineError>;

/// Everything produced by one run.
#[derive(Debug, Clone)]
pub struct AnalysisRun {
    pub report: Report,
    pub dataset: Dataset,
    pub ie: BTreeMap<Role, IESeries>,
}

/// Runs the pipeline without touching the filesystem beyond reading inputs.
pub fn compute(config: &AnalysisConfig) -> Result<AnalysisRun> {
    let dataset = assemble_dataset(&config.specs, config.range, &config.required_roles())
        .map_err(|e| PipelineError {
            stage: Stage::Ingest,
            role: e.role,
            error: e.error,
        })?;
    let manifest = Manifest::load_from_dir(&config.data_dir).map_err(PipelineError::new(Stage::Ingest, None))?;

    let mut ie = BTreeMap::new();
    for (&role, series) in &dataset.series {
        let t = ie_transform(series, config.base_year).map_err(PipelineError::new(Stage::Transform, Some(role)))?;
        ie.insert(role, t);
    }
    let ie_of = |role: Role, stage: Stage| {
        ie.get(&role).ok_or_else(|| PipelineError {
            stage,
            role: Some(role),
            error: Error::Config(format!("no {role} series in the dataset")),
        })
    };

    let full = Phase {
        label: FULL_WINDOW.into(),
        start_year: config.range.start,
        end_year: config.range.end,
    };

    let mut growth = Vec::new();
    if config.analyses.contains(&Analysis::Growth) {
        for (&role, series) in &ie {
            let fits = std::iter::once(&full)
                .chain(&config.phases)
                .map(|p| fit_growth_with(series, p, config.intercept))
                .collect::<std::result::Result<Vec<GrowthFit>, _>>()
                .map_err(PipelineError::new(Stage::Growth, Some(role)))?;
            growth.push(SeriesGrowth { role, fits });
        }
    }

    let mut elasticities = Vec::new();
    if config.analyses.contains(&Analysis::Elasticity) {
        for (response, predictor) in ELASTICITY_PAIRS {
            let y = ie_of(response, Stage::Elasticity)?;
            let x = ie_of(predictor, Stage::Elasticity)?;
            for phase in &config.fit_phases {
                let fit = fit_elasticity_with(y, x, phase, config.intercept)
                    .map_err(PipelineError::new(Stage::Elasticity, Some(response)))?;
                elasticities.push(fit);
            }
        }
    }

    let mut chains = Vec::new();
    let mut prediction = None;
    if config.analyses.contains(&Analysis::Chain) {
        let inv = ie_of(Role::Investment, Stage::Chain)?;
        let prod = ie_of(Role::Productivity, Stage::Chain)?;
        let gdppc = ie_of(Role::GdpPerCapita, Stage::Chain)?;
        for phase in &config.fit_phases {
            chains.push(
                build_chain_with(inv, prod, gdppc, phase, config.intercept)
                    .map_err(PipelineError::new(Stage::Chain, None))?,
            );
        }
        let (ie_gdppc, assignment) =
            predict_ie_gdppc_phased(&chains, inv).map_err(PipelineError::new(Stage::Chain, None))?;
        let population = dataset
            .require(Role::Population)
            .map_err(PipelineError::new(Stage::Chain, Some(Role::Population)))?;
        let observed = dataset
            .require(Role::Gdp)
            .map_err(PipelineError::new(Stage::Chain, Some(Role::Gdp)))?;
        let base_value = observed.get(config.base_year).ok_or_else(|| PipelineError {
            stage: Stage::Chain,
            role: Some(Role::Gdp),
            error: Error::Gap {
                what: "gdp".into(),
                years: vec![config.base_year],
            },
        })?;
        let predicted = predict_gdp(&ie_gdppc, population, base_value, config.base_year)
            .map_err(PipelineError::new(Stage::Chain, Some(Role::Population)))?;
        let result = accuracy_score(observed, &predicted, &config.fit_phases)
            .map_err(PipelineError::new(Stage::Chain, Some(Role::Gdp)))?;
        prediction = Some(Prediction {
            result,
            ie_gdppc,
            assignment,
            evaluation_phases: config.fit_phases.clone(),
        });
    }

    let report = Report {
        config_sha256: config.config_hash.clone(),
        manifest,
        base_year: config.base_year,
        range: config.range,
        phases: config.phases.clone(),
        fit_phases: config.fit_phases.clone(),
        analyses: config.analyses.iter().copied().collect(),
        intercept: config.intercept,
        growth,
        elasticities,
        chains,
        prediction,
    };
    Ok(AnalysisRun { report, dataset, ie })
}

/// Computes the analysis and writes `report.json` plus plot data into the
/// configured output directory.
pub fn run_analyze(config: &AnalysisConfig) -> Result<AnalysisRun> {
    run_analyze_into(config, &config.output_dir)
}

pub fn run_analyze_into(config: &AnalysisConfig, output_dir: &Path) -> Result<AnalysisRun> {
    let analysis = compute(config)?;
    write_report(&analysis.report, output_dir).map_err(PipelineError::new(Stage::Output, None))?;
    emit_plot_data(&analysis.report, &analysis.dataset, output_dir).map_err(PipelineError::new(Stage::Output, None))?;
    Ok(analysis)
}

pub fn write_report(report: &Report, output_dir: &Path) -> std::result::Result<PathBuf, Error> {
    std::fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    let path = output_dir.join(REPORT_FILE);
    std::fs::write(&path, report.render()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// A plot-data table: header plus rows of optional cells.
struct Table {
    name: String,
    header: Vec<String>,
    rows: Vec<Vec<Option<String>>>,
}

impl Table {
    fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = row.iter().map(|c| c.as_deref().unwrap_or("")).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

fn num(x: f64) -> Option<String> {
    Some(fmt_num(x))
}

fn lower(label: &str) -> String {
    label.to_ascii_lowercase()
}

fn growth_figure(name: &str, report: &Report, ie: &IESeries, role: Role, windows: &[Phase]) -> Table {
    let ie_col = format!("ie_{role}");
    let fit_cols: Vec<String> = windows.iter().map(|p| format!("fit_{}", lower(&p.label))).collect();
    let mut header = vec!["year", ie_col.as_str()];
    header.extend(fit_cols.iter().map(String::as_str));
    let mut t = Table::new(name, &header);
    for (year, v) in ie.iter() {
        let mut row = vec![Some(year.to_string()), num(v)];
        for w in windows {
            let cell = report
                .growth_fit(role, &w.label)
                .filter(|_| w.contains(year))
                .and_then(|g| num(g.fit.predict((year - ie.base_year()) as f64)));
            row.push(cell);
        }
        t.rows.push(row);
    }
    t
}

fn compare_figure(name: &str, a: (&str, &IESeries), b: (&str, &IESeries)) -> Table {
    let mut t = Table::new(name, &["year", a.0, b.0]);
    for (year, x) in a.1.iter() {
        t.rows.push(vec![Some(year.to_string()), num(x), b.1.get(year).and_then(num)]);
    }
    t
}

fn scatter_figures(
    prefix: &str,
    report: &Report,
    ie: &BTreeMap<Role, IESeries>,
    response: Role,
    predictor: Role,
) -> Vec<Table> {
    let x_col = format!("ie_{predictor}");
    let y_col = format!("ie_{response}");
    report
        .fit_phases
        .iter()
        .enumerate()
        .filter_map(|(k, phase)| {
            let e = report.elasticity(response, predictor, &phase.label)?;
            let mut t = Table::new(format!("{prefix}_{}", k + 1), &[x_col.as_str(), y_col.as_str(), "fitted"]);
            for &year in &e.years {
                let x = ie[&predictor].get(year)?;
                let y = ie[&response].get(year)?;
                t.rows.push(vec![num(x), num(y), num(e.fit.predict(x))]);
            }
            Some(t)
        })
        .collect()
}

/// Writes one CSV per figure into `output_dir` and returns their paths in
/// figure order. Only figures whose analyses ran are written.
pub fn emit_plot_data(report: &Report, dataset: &Dataset, output_dir: &Path) -> std::result::Result<Vec<PathBuf>, Error> {
    let ie: BTreeMap<Role, IESeries> = dataset
        .series
        .iter()
        .map(|(&r, s)| Ok((r, ie_transform(s, report.base_year)?)))
        .collect::<std::result::Result<_, Error>>()?;
    let has = |r: Role| ie.contains_key(&r);
    let mut tables = Vec::new();

    if report.analyses.contains(&Analysis::Growth) {
        for (name, role) in [("fig01a", Role::Gdp), ("fig01b", Role::Cpi)] {
            if let Some(s) = dataset.get(role) {
                let col = format!("{role}_index");
                let mut t = Table::new(name, &["year", col.as_str()]);
                for (y, v) in s.iter() {
                    t.rows.push(vec![Some(y.to_string()), num(v)]);
                }
                tables.push(t);
            }
        }
        let full = [Phase {
            label: FULL_WINDOW.into(),
            start_year: report.range.start,
            end_year: report.range.end,
        }];
        if has(Role::Gdp) {
            tables.push(growth_figure("fig02a", report, &ie[&Role::Gdp], Role::Gdp, &report.phases));
        }
        if has(Role::Cpi) {
            tables.push(growth_figure("fig02b", report, &ie[&Role::Cpi], Role::Cpi, &full));
        }
        if has(Role::GdpPerCapita) {
            tables.push(growth_figure(
                "fig03",
                report,
                &ie[&Role::GdpPerCapita],
                Role::GdpPerCapita,
                &report.phases,
            ));
        }
    }

    if report.analyses.contains(&Analysis::Elasticity) {
        let prod = &ie[&Role::Productivity];
        tables.push(compare_figure(
            "fig04",
            ("ie_productivity", prod),
            ("ie_gdp_per_capita", &ie[&Role::GdpPerCapita]),
        ));
        tables.extend(scatter_figures("fig05", report, &ie, Role::GdpPerCapita, Role::Productivity));
        tables.push(compare_figure("fig06", ("ie_productivity", prod), ("ie_wages", &ie[&Role::Wages])));
        tables.extend(scatter_figures("fig07", report, &ie, Role::Wages, Role::Productivity));
        tables.push(compare_figure(
            "fig08",
            ("ie_investment", &ie[&Role::Investment]),
            ("ie_productivity", prod),
        ));
        tables.extend(scatter_figures("fig09", report, &ie, Role::Productivity, Role::Investment));
    }

    if let Some(p) = &report.prediction {
        let r = &p.result;
        let mut t = Table::new("fig10_1", &["year", "observed_gdp", "predicted_gdp", "in_phase"]);
        for (year, pred) in r.predicted_gdp.iter() {
            let in_phase = p.assignment.get(&year).map(|a| a.in_phase).unwrap_or(false);
            t.rows.push(vec![
                Some(year.to_string()),
                r.observed_gdp.get(year).and_then(num),
                num(pred),
                Some(if in_phase { "1" } else { "0" }.into()),
            ]);
        }
        tables.push(t);
        let mut t = Table::new("fig10_2", &["predicted_gdp", "observed_gdp", "fitted"]);
        for &year in &r.evaluation_years {
            let pred = r.predicted_gdp.get(year).unwrap();
            let obs = r.observed_gdp.get(year).unwrap();
            t.rows.push(vec![num(pred), num(obs), num(r.comparison_slope * pred)]);
        }
        tables.push(t);
    }

    std::fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    tables
        .iter()
        .map(|t| {
            let path = output_dir.join(format!("{}.csv", t.name));
            std::fs::write(&path, t.render()).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}
