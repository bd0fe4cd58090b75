//! Synthetic data generators and an independent OLS reference.
//!
//! Generator contract: a `ChaCha8Rng` seeded with `seed_from_u64(seed)`
//! draws one standard normal per year in ascending year order, scaled by
//! `noise_sd`. Levels are `exp(signal + noise)`, so they stay positive.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::ingest::{emit_generic, Dataset, Role, YearRange};
use crate::series::{AnnualSeries, Unit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub lambda: f64,
    pub base_year: i32,
    pub n_years: usize,
    pub noise_sd: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn exact(lambda: f64, base_year: i32, n_years: usize) -> Self {
        Self {
            lambda,
            base_year,
            n_years,
            noise_sd: 0.0,
            seed: 0,
        }
    }
}

fn noise(n: usize, sd: f64, seed: u64) -> Vec<f64> {
    if sd == 0.0 {
        return vec![0.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
        .collect()
}

/// `value(y) = exp(lambda * (y - base_year) + eps_y)`, `eps_y ~ N(0, noise_sd²)`.
pub fn gen_exponential(spec: &SyntheticSpec) -> AnnualSeries {
    let eps = noise(spec.n_years, spec.noise_sd, spec.seed);
    let obs = (0..spec.n_years)
        .map(|t| {
            let y = spec.base_year + t as i32;
            (y, (spec.lambda * t as f64 + eps[t]).exp())
        })
        .collect();
    AnnualSeries::new("synthetic", Unit::Index, obs).expect("exp() is positive and finite")
}

/// Parameters for [`gen_chained_economy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomySpec {
    /// Elasticity of productivity on investment.
    pub inv_to_prod: f64,
    /// Elasticity of GDP per capita on productivity.
    pub prod_to_gdppc: f64,
    pub lambda_inv: f64,
    /// Annual population growth as a fraction.
    pub population_rate: f64,
    pub base_year: i32,
    pub n_years: usize,
    pub seed: u64,
    /// Log-scale noise on investment only; downstream relations stay exact.
    pub noise_sd: f64,
}

impl EconomySpec {
    pub fn noiseless(inv_to_prod: f64, prod_to_gdppc: f64) -> Self {
        Self {
            inv_to_prod,
            prod_to_gdppc,
            lambda_inv: 0.03,
            population_rate: 0.006,
            base_year: 2000,
            n_years: 20,
            seed: 0,
            noise_sd: 0.0,
        }
    }
}

const CPI_LAMBDA: f64 = 0.021;
const WAGE_ELASTICITY: f64 = 1.0;

/// Builds all seven roles from a planted investment→productivity→GDP-per-capita
/// chain, as levels (not rebased).
///
/// Investment IE is `lambda_inv * t` plus noise, productivity IE is
/// `b1 * investment IE`, GDP-per-capita IE is `b2 * productivity IE`, and
/// GDP is GDP per capita times population. Wages track productivity one for
/// one and CPI grows at a fixed 2.1% log rate.
pub fn gen_chained_economy(spec: &EconomySpec) -> Dataset {
    let n = spec.n_years;
    let eps = noise(n, spec.noise_sd, spec.seed);
    let years: Vec<i32> = (0..n).map(|t| spec.base_year + t as i32).collect();
    let ie_inv: Vec<f64> = (0..n).map(|t| spec.lambda_inv * t as f64 + eps[t]).collect();
    let ie_prod: Vec<f64> = ie_inv.iter().map(|x| spec.inv_to_prod * x).collect();
    let ie_gdppc: Vec<f64> = ie_prod.iter().map(|x| spec.prod_to_gdppc * x).collect();

    let level = |name: &str, unit: Unit, base: f64, ie: &dyn Fn(usize) -> f64| {
        let obs: BTreeMap<i32, f64> = (0..n).map(|t| (years[t], base * ie(t).exp())).collect();
        AnnualSeries::new(name, unit, obs).expect("positive finite levels")
    };
    let pop_lambda = spec.population_rate.ln_1p();

    let mut series = BTreeMap::new();
    series.insert(Role::Investment, level("investment", Unit::CurrencyLevel, 200_000.0, &|t| ie_inv[t]));
    series.insert(Role::Productivity, level("productivity", Unit::Index, 80.0, &|t| ie_prod[t]));
    series.insert(Role::GdpPerCapita, level("gdp_per_capita", Unit::CurrencyLevel, 25_000.0, &|t| ie_gdppc[t]));
    series.insert(Role::Population, level("population", Unit::PopulationCount, 60_000_000.0, &|t| pop_lambda * t as f64));
    series.insert(
        Role::Gdp,
        level("gdp", Unit::CurrencyLevel, 25_000.0 * 60_000_000.0, &|t| ie_gdppc[t] + pop_lambda * t as f64),
    );
    series.insert(Role::Wages, level("wages", Unit::CurrencyLevel, 30_000.0, &|t| WAGE_ELASTICITY * ie_prod[t]));
    series.insert(Role::Cpi, level("cpi", Unit::Index, 72.0, &|t| CPI_LAMBDA * t as f64));

    Dataset {
        base_year: spec.base_year,
        coverage: YearRange {
            start: spec.base_year,
            end: spec.base_year + n as i32 - 1,
        },
        series,
    }
}

/// Writes each series as `<role>.csv` in the generic year,value format.
pub fn write_dataset(dataset: &Dataset, dir: &Path) -> Result<Vec<(Role, PathBuf)>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    dataset
        .series
        .iter()
        .map(|(&role, s)| {
            let path = dir.join(format!("{role}.csv"));
            std::fs::write(&path, emit_generic(s)).map_err(|e| Error::io(&path, e))?;
            Ok((role, path))
        })
        .collect()
}

/// Textbook uncentered-sum OLS: `slope = (nΣxy − ΣxΣy) / (nΣx² − (Σx)²)`.
///
/// Deliberately a different code path from [`crate::regress::fit_line`].
pub fn ols_reference(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 3 {
        return Err(Error::Fit("need at least 3 points".into()));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let dx = n * sxx - sx * sx;
    if dx <= 0.0 || points.iter().all(|p| p.0 == points[0].0) {
        return Err(Error::Fit("degenerate x".into()));
    }
    let num = n * sxy - sx * sy;
    let slope = num / dx;
    let intercept = (sy - slope * sx) / n;
    let dy = n * syy - sy * sy;
    let r_squared = if dy <= 0.0 { 1.0 } else { num * num / (dx * dy) };
    Ok((slope, intercept, r_squared))
}
