//! The analysis report and its deterministic JSON rendering.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::chain::{ElasticityChain, PredictionResult, YearAssignment};
use crate::config::Analysis;
use crate::ingest::{Manifest, Role, YearRange};
use crate::regress::{ElasticityFit, GrowthFit, InterceptMode, LinearFit};
use crate::series::{IESeries, Phase};

pub const TOOL_NAME: &str = "iegrowth";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits kept for every float in the report and plot files.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Label of the whole-range growth window.
pub const FULL_WINDOW: &str = "full";

/// Rounds to [`SIGNIFICANT_DIGITS`] and folds -0 into 0.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let v: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap();
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Shortest decimal form of `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

pub fn fmt_percent(fraction: f64) -> String {
    format!("{:.2}%", fraction * 100.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesGrowth {
    pub role: Role,
    /// Whole-range window first, then one fit per phase.
    pub fits: Vec<GrowthFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub result: PredictionResult,
    pub ie_gdppc: IESeries,
    pub assignment: BTreeMap<i32, YearAssignment>,
    pub evaluation_phases: Vec<Phase>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config_sha256: String,
    pub manifest: Option<Manifest>,
    pub base_year: i32,
    pub range: YearRange,
    pub phases: Vec<Phase>,
    pub fit_phases: Vec<Phase>,
    pub analyses: Vec<Analysis>,
    pub intercept: InterceptMode,
    pub growth: Vec<SeriesGrowth>,
    pub elasticities: Vec<ElasticityFit>,
    pub chains: Vec<ElasticityChain>,
    pub prediction: Option<Prediction>,
}

fn phase_json(p: &Phase) -> Value {
    json!({ "label": p.label, "start": p.start_year, "end": p.end_year })
}

fn line_json(f: &LinearFit) -> Value {
    json!({ "slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared, "n": f.n })
}

fn elasticity_json(e: &ElasticityFit) -> Value {
    json!({
        "response": e.response,
        "predictor": e.predictor,
        "phase": e.phase.label,
        "start": e.phase.start_year,
        "end": e.phase.end_year,
        "slope": e.fit.slope,
        "intercept": e.fit.intercept,
        "r_squared": e.fit.r_squared,
        "n": e.fit.n,
        "years": e.years,
    })
}

impl Report {
    pub fn growth_fit(&self, role: Role, window: &str) -> Option<&GrowthFit> {
        self.growth
            .iter()
            .find(|g| g.role == role)?
            .fits
            .iter()
            .find(|f| f.phase.label == window)
    }

    pub fn elasticity(&self, response: Role, predictor: Role, phase: &str) -> Option<&ElasticityFit> {
        self.elasticities.iter().find(|e| {
            e.response == response.as_str() && e.predictor == predictor.as_str() && e.phase.label == phase
        })
    }

    pub fn chain(&self, phase: &str) -> Option<&ElasticityChain> {
        self.chains.iter().find(|c| c.phase.label == phase)
    }

    /// Field order is fixed by construction.
    pub fn to_json(&self) -> Value {
        let growth: Vec<Value> = self
            .growth
            .iter()
            .map(|g| {
                json!({
                    "role": g.role,
                    "fits": g.fits.iter().map(|f| json!({
                        "window": f.phase.label,
                        "start": f.phase.start_year,
                        "end": f.phase.end_year,
                        "n": f.fit.n,
                        "lambda": f.lambda,
                        "intercept": f.fit.intercept,
                        "r_squared": f.fit.r_squared,
                        "annual_rate": f.annual_rate,
                        "annual_rate_pct": fmt_percent(f.annual_rate),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();

        let chains: Vec<Value> = self
            .chains
            .iter()
            .map(|c| {
                json!({
                    "phase": c.phase.label,
                    "start": c.phase.start_year,
                    "end": c.phase.end_year,
                    "inv_to_prod": line_json(&c.inv_to_prod.fit),
                    "prod_to_gdppc": line_json(&c.prod_to_gdppc.fit),
                })
            })
            .collect();

        let prediction = match &self.prediction {
            None => Value::Null,
            Some(p) => {
                let r = &p.result;
                let years: Vec<Value> = r
                    .predicted_gdp
                    .iter()
                    .map(|(y, pred)| {
                        let a = &p.assignment[&y];
                        json!({
                            "year": y,
                            "observed_gdp": r.observed_gdp.get(y),
                            "predicted_gdp": pred,
                            "predicted_ie_gdp_per_capita": p.ie_gdppc.get(y),
                            "chain": a.chain,
                            "in_phase": a.in_phase,
                        })
                    })
                    .collect();
                json!({
                    "evaluation_phases": p.evaluation_phases.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
                    "evaluation_years": r.evaluation_years,
                    "comparison_slope": r.comparison_slope,
                    "reverse_slope": r.reverse_slope,
                    "accuracy": r.accuracy,
                    "accuracy_pct": fmt_percent(r.accuracy),
                    "years": years,
                })
            }
        };

        let mut doc = Map::new();
        doc.insert("tool".into(), json!({ "name": TOOL_NAME, "version": TOOL_VERSION }));
        doc.insert(
            "provenance".into(),
            json!({
                "config_sha256": self.config_sha256,
                "manifest": self.manifest.as_ref().map(|m| &m.source),
            }),
        );
        doc.insert(
            "settings".into(),
            json!({
                "base_year": self.base_year,
                "range": [self.range.start, self.range.end],
                "phases": self.phases.iter().map(phase_json).collect::<Vec<_>>(),
                "fit_phases": self.fit_phases.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
                "analyses": self.analyses,
                "intercept": self.intercept,
            }),
        );
        doc.insert("growth".into(), Value::Array(growth));
        doc.insert(
            "elasticities".into(),
            Value::Array(self.elasticities.iter().map(elasticity_json).collect()),
        );
        doc.insert("chains".into(), Value::Array(chains));
        doc.insert("prediction".into(), prediction);
        let mut doc = Value::Object(doc);
        round_floats(&mut doc);
        doc
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
        s.push('\n');
        s
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap());
            *v = serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}
