//! Least-squares line fits over phase windows.
//!
//! Growth fits regress IE values on years since the base year, so the slope
//! is the rate constant. Elasticity fits regress one IE series on another
//! over the years both share inside a phase.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ie::rate_from_lambda;
use crate::series::{IESeries, Phase};

/// Fewest points accepted by any fit.
pub const MIN_POINTS: usize = 3;

/// Whether the intercept is estimated or pinned at zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterceptMode {
    #[default]
    Estimated,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub phase: Phase,
    pub fit: LinearFit,
    /// Rate constant, equal to the fitted slope.
    pub lambda: f64,
    /// `exp(lambda) - 1`.
    pub annual_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElasticityFit {
    pub response: String,
    pub predictor: String,
    pub phase: Phase,
    pub fit: LinearFit,
    pub years: Vec<i32>,
}

impl ElasticityFit {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }

    pub fn intercept(&self) -> f64 {
        self.fit.intercept
    }
}

/// Ordinary least squares with intercept, using centered sums.
///
/// When every `y` is identical the slope is 0 and R² is 1.
pub fn fit_line(points: &[(f64, f64)]) -> Result<LinearFit> {
    check_points(points)?;
    let n = points.len();
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;

    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Fit("all x values are identical".into()));
    }

    let y0 = points[0].1;
    if points.iter().all(|p| p.1 == y0) {
        return Ok(LinearFit {
            slope: 0.0,
            intercept: y0,
            r_squared: 1.0,
            n,
        });
    }

    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        n,
    })
}

/// Least squares through the origin: `slope = Σxy / Σx²`.
///
/// R² here is the uncentered `1 - SSres / Σy²`.
pub fn fit_line_through_origin(points: &[(f64, f64)]) -> Result<LinearFit> {
    check_points(points)?;
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let syy: f64 = points.iter().map(|p| p.1 * p.1).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all x values are zero".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    Ok(LinearFit {
        slope,
        intercept: 0.0,
        r_squared,
        n: points.len(),
    })
}

pub fn fit_line_with(points: &[(f64, f64)], mode: InterceptMode) -> Result<LinearFit> {
    match mode {
        InterceptMode::Estimated => fit_line(points),
        InterceptMode::Zero => fit_line_through_origin(points),
    }
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::Fit("non-finite point".into()));
    }
    Ok(())
}

pub fn fit_growth(ie: &IESeries, phase: &Phase) -> Result<GrowthFit> {
    fit_growth_with(ie, phase, InterceptMode::Estimated)
}

/// Fits IE value against years since the base year, inside `phase`.
pub fn fit_growth_with(ie: &IESeries, phase: &Phase, mode: InterceptMode) -> Result<GrowthFit> {
    let points: Vec<(f64, f64)> = ie
        .iter()
        .filter(|(y, _)| phase.contains(*y))
        .map(|(y, v)| ((y - ie.base_year()) as f64, v))
        .collect();
    if points.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "{} has {} year(s) in {phase}, need {MIN_POINTS}",
            ie.name(),
            points.len()
        )));
    }
    let fit = fit_line_with(&points, mode)?;
    Ok(GrowthFit {
        phase: phase.clone(),
        lambda: fit.slope,
        annual_rate: rate_from_lambda(fit.slope)?,
        fit,
    })
}

pub fn fit_elasticity(response: &IESeries, predictor: &IESeries, phase: &Phase) -> Result<ElasticityFit> {
    fit_elasticity_with(response, predictor, phase, InterceptMode::Estimated)
}

/// Regresses `response` on `predictor` over their common years in `phase`.
/// Years missing from either series are skipped.
pub fn fit_elasticity_with(
    response: &IESeries,
    predictor: &IESeries,
    phase: &Phase,
    mode: InterceptMode,
) -> Result<ElasticityFit> {
    let mut years = Vec::new();
    let mut points = Vec::new();
    for (year, x) in predictor.iter().filter(|(y, _)| phase.contains(*y)) {
        if let Some(y) = response.get(year) {
            years.push(year);
            points.push((x, y));
        }
    }
    if points.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "{} vs {} share {} year(s) in {phase}, need {MIN_POINTS}",
            response.name(),
            predictor.name(),
            points.len()
        )));
    }
    let fit = fit_line_with(&points, mode).map_err(|e| match e {
        Error::Fit(msg) => Error::Fit(format!(
            "{} vs {} in {phase}: {msg}",
            response.name(),
            predictor.name()
        )),
        other => other,
    })?;
    Ok(ElasticityFit {
        response: response.name().to_string(),
        predictor: predictor.name().to_string(),
        phase: phase.clone(),
        fit,
        years,
    })
}
