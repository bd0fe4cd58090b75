//! The IE transform and the rate-constant / growth-rate conversions.
//!
//! A pure exponential process `G(t) = exp(lambda * t)` maps to the straight
//! line `lambda * t` once each value is taken relative to the base year and
//! logged. `t = 0` is the base year, so the transformed series is exactly 0
//! there. The rate constant and the annual growth rate are related by
//! `r = exp(lambda) - 1`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{AnnualSeries, IESeries, Unit};

/// A rate constant together with the annual growth rate it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateConstant {
    /// Per-year rate constant.
    pub lambda: f64,
    /// Annual growth rate as a fraction.
    pub rate: f64,
}

impl RateConstant {
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        Ok(Self {
            lambda,
            rate: rate_from_lambda(lambda)?,
        })
    }

    pub fn from_rate(rate: f64) -> Result<Self> {
        Ok(Self {
            lambda: lambda_from_rate(rate)?,
            rate,
        })
    }
}

/// `lambda = ln(1 + r)`.
pub fn lambda_from_rate(r: f64) -> Result<f64> {
    if !r.is_finite() || r <= -1.0 {
        return Err(Error::Domain(format!(
            "growth rate {r} must be finite and above -1"
        )));
    }
    Ok(r.ln_1p())
}

/// `r = exp(lambda) - 1`.
pub fn rate_from_lambda(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("rate constant {lambda} is not finite")));
    }
    Ok(lambda.exp_m1())
}

/// Turns a percent-change series into an index with value 1 at `base_year`.
///
/// Forward years compound `value(y) = value(y-1) * (1 + pct(y)/100)`; years
/// before the base are divided back out by the same rule. The base year may
/// sit one year before the first observation, in which case the index starts
/// there.
pub fn cumulate_growth(series: &AnnualSeries, base_year: i32) -> Result<AnnualSeries> {
    if series.unit() != Unit::PercentChangePerAnnum {
        return Err(Error::Argument(format!(
            "{}: cumulate_growth needs a percent-change series, got {}",
            series.name(),
            series.unit()
        )));
    }
    let (first, last) = match (series.first_year(), series.last_year()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::EmptySeries(Some(series.name().to_string()))),
    };
    if base_year < first - 1 || base_year > last {
        return Err(Error::Argument(format!(
            "{}: base year {base_year} is outside {first}-{last}",
            series.name()
        )));
    }
    let missing = series.missing_years();
    if !missing.is_empty() {
        return Err(Error::Gap {
            what: series.name().to_string(),
            years: missing,
        });
    }

    let factor = |year: i32| -> Result<f64> {
        let pct = series.get(year).expect("contiguous range checked above");
        if pct <= -100.0 {
            return Err(Error::Domain(format!(
                "{}: percent change {pct} in {year} is not above -100",
                series.name()
            )));
        }
        Ok(1.0 + pct / 100.0)
    };

    let mut index = BTreeMap::new();
    index.insert(base_year, 1.0);
    let mut level = 1.0;
    for year in base_year + 1..=last {
        level *= factor(year)?;
        index.insert(year, level);
    }
    level = 1.0;
    for year in (first..base_year).rev() {
        level /= factor(year + 1)?;
        index.insert(year, level);
    }
    AnnualSeries::new(series.name(), Unit::Index, index)
}

fn base_value(series: &AnnualSeries, base_year: i32) -> Result<f64> {
    if !series.unit().is_level() {
        return Err(Error::Argument(format!(
            "{}: a percent-change series must be cumulated before use as a level",
            series.name()
        )));
    }
    let base = series.get(base_year).ok_or_else(|| {
        Error::Argument(format!(
            "{}: base year {base_year} not in series",
            series.name()
        ))
    })?;
    if base <= 0.0 {
        return Err(Error::Domain(format!(
            "{}: non-positive base value {base}",
            series.name()
        )));
    }
    Ok(base)
}

/// `point(y) = ln(value(y) / value(base_year))`, with the base point set to 0.
pub fn ie_transform(series: &AnnualSeries, base_year: i32) -> Result<IESeries> {
    let base = base_value(series, base_year)?;
    let mut points = BTreeMap::new();
    for (year, value) in series.iter() {
        if value <= 0.0 {
            return Err(Error::Domain(format!(
                "{}: non-positive value {value} in {year}",
                series.name()
            )));
        }
        let ie = if year == base_year {
            0.0
        } else {
            (value / base).ln()
        };
        points.insert(year, ie);
    }
    IESeries::new(series.name(), base_year, points)
}

/// Divides every value by the base-year value. The result is an index.
pub fn rebase(series: &AnnualSeries, base_year: i32) -> Result<AnnualSeries> {
    let base = base_value(series, base_year)?;
    let observations = series
        .iter()
        .map(|(y, v)| (y, if y == base_year { 1.0 } else { v / base }))
        .collect();
    AnnualSeries::new(series.name(), Unit::Index, observations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pct(pairs: &[(i32, f64)]) -> AnnualSeries {
        AnnualSeries::from_pairs("g", Unit::PercentChangePerAnnum, pairs.iter().copied()).unwrap()
    }

    fn level(pairs: &[(i32, f64)]) -> AnnualSeries {
        AnnualSeries::from_pairs("x", Unit::CurrencyLevel, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn cumulate_two_percent() {
        let idx = cumulate_growth(&pct(&[(2001, 2.0), (2002, 2.0)]), 2000).unwrap();
        assert_eq!(idx.unit(), Unit::Index);
        assert_eq!(idx.get(2000), Some(1.0));
        assert!((idx.get(2001).unwrap() - 1.02).abs() < 1e-15);
        assert!((idx.get(2002).unwrap() - 1.0404).abs() < 1e-15);
    }

    #[test]
    fn cumulate_zero_growth() {
        let idx = cumulate_growth(&pct(&[(2001, 0.0)]), 2000).unwrap();
        assert_eq!(idx.get(2000), Some(1.0));
        assert_eq!(idx.get(2001), Some(1.0));
    }

    #[test]
    fn cumulate_constant_log_rate() {
        // 19 factors of e^0.021 multiply to e^(0.021*19) = 1.4903336186074025...
        let step = 100.0 * 0.021f64.exp_m1();
        let s = pct(&(2001..=2019).map(|y| (y, step)).collect::<Vec<_>>());
        let idx = cumulate_growth(&s, 2000).unwrap();
        assert!((idx.get(2019).unwrap() - 1.490_333_618_607_402_6).abs() < 1e-12);
    }

    #[test]
    fn cumulate_backwards_from_interior_base() {
        let s = pct(&[(2000, 5.0), (2001, 10.0), (2002, -50.0)]);
        let idx = cumulate_growth(&s, 2001).unwrap();
        assert_eq!(idx.get(2001), Some(1.0));
        assert!((idx.get(2000).unwrap() - 1.0 / 1.1).abs() < 1e-15);
        assert!((idx.get(2002).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cumulate_rejects_gap_and_far_base() {
        let s = pct(&[(2001, 1.0), (2003, 1.0)]);
        match cumulate_growth(&s, 2000).unwrap_err() {
            Error::Gap { years, .. } => assert_eq!(years, vec![2002]),
            e => panic!("unexpected {e}"),
        }
        let s = pct(&[(2001, 1.0), (2002, 1.0)]);
        assert!(matches!(cumulate_growth(&s, 1998), Err(Error::Argument(_))));
        assert!(matches!(cumulate_growth(&s, 2003), Err(Error::Argument(_))));
    }

    #[test]
    fn ie_of_constant_is_zero() {
        let ie = ie_transform(&level(&[(2000, 5.0), (2001, 5.0), (2002, 5.0)]), 2000).unwrap();
        assert!(ie.iter().all(|(_, v)| v == 0.0));
    }

    #[test]
    fn ie_of_exponential_is_line() {
        let s = level(&(2000..2020).map(|y| (y, (0.021 * (y - 2000) as f64).exp())).collect::<Vec<_>>());
        let ie = ie_transform(&s, 2000).unwrap();
        for (y, v) in ie.iter() {
            assert!((v - 0.021 * (y - 2000) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn ie_errors() {
        let s = level(&[(2000, 1.0), (2001, 2.0)]);
        assert!(matches!(ie_transform(&s, 1999), Err(Error::Argument(_))));
        let p = pct(&[(2000, 1.0)]);
        assert!(matches!(ie_transform(&p, 2000), Err(Error::Argument(_))));
    }

    #[test]
    fn lambda_rate_examples() {
        assert_eq!(lambda_from_rate(0.0).unwrap(), 0.0);
        assert!((lambda_from_rate(0.021).unwrap() - 0.020_782_539_182_528_504).abs() < 1e-15);
        assert!(lambda_from_rate(-1.0).is_err());
        assert!(lambda_from_rate(f64::NAN).is_err());
        assert_eq!(rate_from_lambda(0.0).unwrap(), 0.0);
        assert!((rate_from_lambda(std::f64::consts::LN_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((rate_from_lambda(0.0208).unwrap() - 0.021_017_827_650_280_62).abs() < 1e-15);
        assert!(rate_from_lambda(f64::INFINITY).is_err());
        for r in [-0.5, 0.0, 0.1, 1.0] {
            let back = rate_from_lambda(lambda_from_rate(r).unwrap()).unwrap();
            assert!((back - r).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_constant_consistent() {
        let rc = RateConstant::from_rate(0.021).unwrap();
        assert!((rc.lambda.exp() - 1.0 - rc.rate).abs() < 1e-12);
        let rc = RateConstant::from_lambda(0.03).unwrap();
        assert!((rc.lambda.exp() - 1.0 - rc.rate).abs() < 1e-12);
    }

    #[test]
    fn rebase_examples() {
        let r = rebase(&level(&[(2000, 4.0), (2001, 8.0)]), 2000).unwrap();
        assert_eq!(r.get(2000), Some(1.0));
        assert_eq!(r.get(2001), Some(2.0));
        assert_eq!(r.unit(), Unit::Index);
        assert_eq!(rebase(&r, 2000).unwrap(), r);
    }

    fn level_strategy() -> impl Strategy<Value = AnnualSeries> {
        proptest::collection::vec(1e-3f64..1e6, 3..30).prop_map(|vals| {
            AnnualSeries::from_pairs(
                "p",
                Unit::CurrencyLevel,
                vals.into_iter().enumerate().map(|(i, v)| (1990 + i as i32, v)),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn base_point_is_exactly_zero(s in level_strategy(), k in 0usize..3) {
            let base = 1990 + k as i32;
            let ie = ie_transform(&s, base).unwrap();
            prop_assert_eq!(ie.get(base), Some(0.0));
        }

        #[test]
        fn scale_invariance(s in level_strategy(), c in 1e-6f64..1e6) {
            let a = ie_transform(&s, 1990).unwrap();
            let b = ie_transform(&s.scaled(c).unwrap(), 1990).unwrap();
            for ((_, x), (_, y)) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn rebase_then_transform_matches(s in level_strategy()) {
            let direct = ie_transform(&s, 1991).unwrap();
            let via = ie_transform(&rebase(&s, 1991).unwrap(), 1991).unwrap();
            for ((_, x), (_, y)) in direct.iter().zip(via.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn exponential_linearity(a in 1e-3f64..1e3, lambda in -0.2f64..0.2, n in 3i32..40) {
            let s = AnnualSeries::from_pairs(
                "e", Unit::Index, (0..n).map(|t| (2000 + t, a * (lambda * t as f64).exp())),
            ).unwrap();
            let ie = ie_transform(&s, 2000).unwrap();
            for (y, v) in ie.iter() {
                prop_assert!((v - lambda * (y - 2000) as f64).abs() < 1e-12);
            }
        }

        #[test]
        fn lambda_rate_round_trip(r in -0.9f64..2.0) {
            let back = rate_from_lambda(lambda_from_rate(r).unwrap()).unwrap();
            prop_assert!((back - r).abs() < 1e-12);
        }

        #[test]
        fn constant_percent_is_collinear(p in -20.0f64..20.0, n in 3i32..30) {
            let s = AnnualSeries::from_pairs(
                "g", Unit::PercentChangePerAnnum, (1..=n).map(|t| (2000 + t, p)),
            ).unwrap();
            let ie = ie_transform(&cumulate_growth(&s, 2000).unwrap(), 2000).unwrap();
            let step = (1.0 + p / 100.0).ln();
            for (y, v) in ie.iter() {
                prop_assert!((v - step * (y - 2000) as f64).abs() < 1e-12);
            }
        }
    }
}
