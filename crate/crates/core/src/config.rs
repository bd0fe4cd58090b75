//! Analysis configuration, read from a TOML file.
//!
//! ```toml
//! data_dir = "../data/uk"        # relative to this file; default "."
//! output_dir = "../out/uk"       # relative to this file; default "out"
//! base_year = 2000               # default: start of range
//! range = [2000, 2019]           # default: first phase start to last phase end
//! analyses = ["growth", "elasticity", "chain"]
//! fit_phases = ["P1", "P3"]      # default: first and last phase
//! zero_intercept = false
//!
//! [[phases]]                     # default: P1 2000-2007, P2 2008-2013, P3 2014-2019
//! label = "P1"
//! start = 2000
//! end = 2007
//!
//! [[series]]
//! id = "lzvd"
//! role = "productivity"
//! path = "uk_productivity_lzvd.csv"
//! format = "ons_timeseries"      # generic_year_value | ons_timeseries | oecd_long
//! unit = "percent_change_per_annum"  # default by role
//! scale = 1.0
//! country = "GBR"                # oecd_long only
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ingest::{Format, Role, SeriesSpec, YearRange};
use crate::regress::{InterceptMode, MIN_POINTS};
use crate::series::{Phase, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Growth,
    Elasticity,
    Chain,
}

impl Analysis {
    pub fn required_roles(self) -> &'static [Role] {
        match self {
            Analysis::Growth => &[],
            Analysis::Elasticity => &[Role::GdpPerCapita, Role::Productivity, Role::Wages, Role::Investment],
            Analysis::Chain => &Role::ALL,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    id: String,
    role: Role,
    path: PathBuf,
    format: Format,
    unit: Option<Unit>,
    scale: Option<f64>,
    country: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    data_dir: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    base_year: Option<i32>,
    range: Option<[i32; 2]>,
    analyses: Option<Vec<Analysis>>,
    fit_phases: Option<Vec<String>>,
    #[serde(default)]
    zero_intercept: bool,
    phases: Option<Vec<Phase>>,
    #[serde(default)]
    series: Vec<RawSeries>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub specs: Vec<SeriesSpec>,
    pub base_year: i32,
    pub range: YearRange,
    pub phases: Vec<Phase>,
    /// Phases used for elasticities, chains and the accuracy score.
    pub fit_phases: Vec<Phase>,
    pub analyses: BTreeSet<Analysis>,
    pub intercept: InterceptMode,
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    /// Hex SHA-256 of the config file bytes.
    pub config_hash: String,
}

impl AnalysisConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir)
    }

    /// Parses config text; relative paths resolve against `dir`.
    pub fn parse(text: &str, dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let config_hash = Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();

        let phases = raw.phases.unwrap_or_else(Phase::uk_default);
        if phases.is_empty() {
            return Err(Error::Config("at least one phase is required".into()));
        }
        for p in &phases {
            if p.start_year > p.end_year {
                return Err(Error::Config(format!("phase {p} ends before it starts")));
            }
            if p.span() < MIN_POINTS {
                return Err(Error::Config(format!("phase {p} spans fewer than {MIN_POINTS} years")));
            }
        }
        for pair in phases.windows(2) {
            if pair[1].start_year <= pair[0].end_year {
                return Err(Error::Config(format!(
                    "phases {} and {} overlap or are out of order",
                    pair[0], pair[1]
                )));
            }
        }
        let mut labels = BTreeSet::new();
        if let Some(p) = phases.iter().find(|p| !labels.insert(p.label.as_str())) {
            return Err(Error::Config(format!("phase label {} used twice", p.label)));
        }

        let range = match raw.range {
            Some([a, b]) => YearRange::new(a, b)?,
            None => YearRange::new(phases[0].start_year, phases[phases.len() - 1].end_year)?,
        };
        if let Some(p) = phases.iter().find(|p| p.start_year < range.start || p.end_year > range.end) {
            return Err(Error::Config(format!(
                "phase {p} falls outside the range {}-{}",
                range.start, range.end
            )));
        }
        let base_year = raw.base_year.unwrap_or(range.start);
        if !range.contains(base_year) {
            return Err(Error::Config(format!(
                "base year {base_year} outside {}-{}",
                range.start, range.end
            )));
        }

        let fit_phases = match raw.fit_phases {
            Some(labels) => labels
                .iter()
                .map(|l| {
                    phases
                        .iter()
                        .find(|p| &p.label == l)
                        .cloned()
                        .ok_or_else(|| Error::Config(format!("fit phase `{l}` is not a defined phase")))
                })
                .collect::<Result<Vec<_>>>()?,
            None if phases.len() == 1 => phases.clone(),
            None => vec![phases[0].clone(), phases[phases.len() - 1].clone()],
        };
        if fit_phases.is_empty() {
            return Err(Error::Config("fit_phases is empty".into()));
        }

        let analyses: BTreeSet<Analysis> = raw
            .analyses
            .unwrap_or_else(|| vec![Analysis::Growth, Analysis::Elasticity, Analysis::Chain])
            .into_iter()
            .collect();
        if analyses.is_empty() {
            return Err(Error::Config("select at least one analysis".into()));
        }

        let data_dir = dir.join(raw.data_dir.unwrap_or_else(|| PathBuf::from(".")));
        let output_dir = dir.join(raw.output_dir.unwrap_or_else(|| PathBuf::from("out")));
        let specs = raw
            .series
            .into_iter()
            .map(|s| {
                let unit = s.unit.unwrap_or_else(|| s.role.default_unit());
                let scale = s.scale.unwrap_or(1.0);
                if !(scale.is_finite() && scale > 0.0) {
                    return Err(Error::Config(format!("{}: scale must be positive", s.id)));
                }
                Ok(SeriesSpec {
                    id: s.id,
                    role: s.role,
                    path: data_dir.join(s.path),
                    format: s.format,
                    unit,
                    base_year,
                    scale,
                    country: s.country.unwrap_or_else(|| "GBR".into()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if specs.is_empty() {
            return Err(Error::Config("no [[series]] entries".into()));
        }

        Ok(Self {
            specs,
            base_year,
            range,
            phases,
            fit_phases,
            analyses,
            intercept: if raw.zero_intercept {
                InterceptMode::Zero
            } else {
                InterceptMode::Estimated
            },
            data_dir,
            output_dir,
            config_hash,
        })
    }

    pub fn required_roles(&self) -> Vec<Role> {
        let roles: BTreeSet<Role> = self
            .analyses
            .iter()
            .flat_map(|a| a.required_roles().iter().copied())
            .collect();
        roles.into_iter().collect()
    }
}
