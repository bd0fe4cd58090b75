//! Chained GDP predictor.
//!
//! Investment drives productivity and productivity drives GDP per capita,
//! each as a straight line in IE space fitted over one phase. Composing the
//! two lines turns observed investment into predicted GDP per capita, and
//! population growth scales that up to total GDP.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::regress::{fit_elasticity_with, fit_line_through_origin, ElasticityFit, InterceptMode, MIN_POINTS};
use crate::series::{AnnualSeries, IESeries, Phase, Unit};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElasticityChain {
    pub phase: Phase,
    /// Productivity IE regressed on investment IE.
    pub inv_to_prod: ElasticityFit,
    /// GDP-per-capita IE regressed on productivity IE.
    pub prod_to_gdppc: ElasticityFit,
}

impl ElasticityChain {
    /// `a2 + b2 * (a1 + b1 * x)`.
    pub fn apply(&self, ie_investment: f64) -> f64 {
        let prod = self.inv_to_prod.fit.predict(ie_investment);
        self.prod_to_gdppc.fit.predict(prod)
    }
}

pub fn build_chain(
    ie_investment: &IESeries,
    ie_productivity: &IESeries,
    ie_gdppc: &IESeries,
    phase: &Phase,
) -> Result<ElasticityChain> {
    build_chain_with(ie_investment, ie_productivity, ie_gdppc, phase, InterceptMode::Estimated)
}

pub fn build_chain_with(
    ie_investment: &IESeries,
    ie_productivity: &IESeries,
    ie_gdppc: &IESeries,
    phase: &Phase,
    mode: InterceptMode,
) -> Result<ElasticityChain> {
    Ok(ElasticityChain {
        phase: phase.clone(),
        inv_to_prod: fit_elasticity_with(ie_productivity, ie_investment, phase, mode)?,
        prod_to_gdppc: fit_elasticity_with(ie_gdppc, ie_productivity, phase, mode)?,
    })
}

/// Runs every investment year through `chain`.
pub fn predict_ie_gdppc(chain: &ElasticityChain, ie_investment: &IESeries) -> Result<IESeries> {
    let points = ie_investment.iter().map(|(y, x)| (y, chain.apply(x))).collect();
    IESeries::predicted("predicted_gdp_per_capita", ie_investment.base_year(), points)
}

/// Which chain produced a predicted year, and whether the year lies inside
/// that chain's own phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YearAssignment {
    pub chain: String,
    pub in_phase: bool,
}

/// Predicts each year with the chain whose phase contains it. Years outside
/// every chain's phase use the nearest earlier chain (or the first chain
/// when none is earlier) and are marked out-of-phase.
pub fn predict_ie_gdppc_phased(
    chains: &[ElasticityChain],
    ie_investment: &IESeries,
) -> Result<(IESeries, BTreeMap<i32, YearAssignment>)> {
    if chains.is_empty() {
        return Err(Error::Argument("no chains to predict with".into()));
    }
    let mut sorted: Vec<&ElasticityChain> = chains.iter().collect();
    sorted.sort_by_key(|c| c.phase.start_year);

    let mut points = BTreeMap::new();
    let mut assignment = BTreeMap::new();
    for (year, x) in ie_investment.iter() {
        let (chain, in_phase) = match sorted.iter().find(|c| c.phase.contains(year)) {
            Some(c) => (*c, true),
            None => {
                let earlier = sorted.iter().rev().find(|c| c.phase.end_year < year);
                (*earlier.unwrap_or(&sorted[0]), false)
            }
        };
        points.insert(year, chain.apply(x));
        assignment.insert(
            year,
            YearAssignment {
                chain: chain.phase.label.clone(),
                in_phase,
            },
        );
    }
    let ie = IESeries::predicted("predicted_gdp_per_capita", ie_investment.base_year(), points)?;
    Ok((ie, assignment))
}

/// `GDP(y) = gdp_base_value * exp(pred(y)) * population(y) / population(base_year)`.
///
/// The result is an index when `gdp_base_value` is exactly 1, otherwise a
/// currency level.
pub fn predict_gdp(
    pred_ie_gdppc: &IESeries,
    population: &AnnualSeries,
    gdp_base_value: f64,
    base_year: i32,
) -> Result<AnnualSeries> {
    if !(gdp_base_value.is_finite() && gdp_base_value > 0.0) {
        return Err(Error::Domain(format!("GDP base value {gdp_base_value} must be positive")));
    }
    let pop_base = population.get(base_year).ok_or_else(|| Error::Gap {
        what: "population".into(),
        years: vec![base_year],
    })?;
    let missing: Vec<i32> = pred_ie_gdppc
        .iter()
        .map(|(y, _)| y)
        .filter(|y| population.get(*y).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Gap {
            what: "population".into(),
            years: missing,
        });
    }
    let observations = pred_ie_gdppc
        .iter()
        .map(|(y, ie)| {
            let pop = population.get(y).expect("checked above");
            let ratio = if y == base_year { 1.0 } else { pop / pop_base };
            (y, gdp_base_value * ie.exp() * ratio)
        })
        .collect();
    let unit = if gdp_base_value == 1.0 {
        Unit::Index
    } else {
        Unit::CurrencyLevel
    };
    AnnualSeries::new("predicted_gdp", unit, observations)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionResult {
    #[serde(skip)]
    pub predicted_gdp: AnnualSeries,
    #[serde(skip)]
    pub observed_gdp: AnnualSeries,
    pub evaluation_years: Vec<i32>,
    /// Zero-intercept slope of observed on predicted.
    pub comparison_slope: f64,
    /// Zero-intercept slope of predicted on observed, kept for transparency.
    pub reverse_slope: f64,
    /// `min(s, 1/s)` for the comparison slope `s`.
    pub accuracy: f64,
}

/// Scores a prediction over the years of `phases` present in both series.
pub fn accuracy_score(
    observed: &AnnualSeries,
    predicted: &AnnualSeries,
    phases: &[Phase],
) -> Result<PredictionResult> {
    let evaluation_years: Vec<i32> = observed
        .years()
        .filter(|y| phases.iter().any(|p| p.contains(*y)) && predicted.get(*y).is_some())
        .collect();
    if evaluation_years.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "only {} common year(s) in the evaluation phases, need {MIN_POINTS}",
            evaluation_years.len()
        )));
    }
    let pairs: Vec<(f64, f64)> = evaluation_years
        .iter()
        .map(|&y| (predicted.get(y).unwrap(), observed.get(y).unwrap()))
        .collect();
    let comparison_slope = fit_line_through_origin(&pairs)?.slope;
    let swapped: Vec<(f64, f64)> = pairs.iter().map(|&(p, o)| (o, p)).collect();
    let reverse_slope = fit_line_through_origin(&swapped)?.slope;
    if !(comparison_slope > 0.0) {
        return Err(Error::Fit(format!(
            "comparison slope {comparison_slope} is not positive"
        )));
    }
    let accuracy = if comparison_slope >= 1.0 {
        1.0 / comparison_slope
    } else {
        comparison_slope
    };
    Ok(PredictionResult {
        predicted_gdp: predicted.clone(),
        observed_gdp: observed.clone(),
        evaluation_years,
        comparison_slope,
        reverse_slope,
        accuracy,
    })
}
