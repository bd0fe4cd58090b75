use std::collections::BTreeMap;

use iegrowth::ie::ie_transform;
use iegrowth::oracle::{gen_exponential, ols_reference, SyntheticSpec};
use iegrowth::regress::{fit_elasticity, fit_growth, fit_line};
use iegrowth::{IESeries, Phase};
use proptest::prelude::*;

fn points() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 3..=50)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fit_line_matches_reference(pts in points()) {
        let f = fit_line(&pts).unwrap();
        let (slope, intercept, r2) = ols_reference(&pts).unwrap();
        prop_assert!(close(f.slope, slope, 1e-9), "{} vs {}", f.slope, slope);
        prop_assert!(close(f.intercept, intercept, 1e-9), "{} vs {}", f.intercept, intercept);
        prop_assert!((f.r_squared - r2).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn affine_equivariance(pts in points(), a in -10.0f64..10.0, b in -100.0f64..100.0) {
        let f = fit_line(&pts).unwrap();
        let moved: Vec<_> = pts.iter().map(|&(x, y)| (x, a * y + b)).collect();
        let g = fit_line(&moved).unwrap();
        prop_assert!(close(g.slope, a * f.slope, 1e-9));
        prop_assert!(close(g.intercept, a * f.intercept + b, 1e-9));
    }

    #[test]
    fn r_squared_bounds(pts in points()) {
        let f = fit_line(&pts).unwrap();
        prop_assert!(f.r_squared >= -1e-12 && f.r_squared <= 1.0 + 1e-12);
    }

    #[test]
    fn exact_line_has_unit_r_squared(xs in proptest::collection::btree_set(-500i32..500, 3..40), m in -5.0f64..5.0, c in -50.0f64..50.0) {
        prop_assume!(m.abs() > 1e-6);
        let pts: Vec<_> = xs.iter().map(|&x| (x as f64, m * x as f64 + c)).collect();
        let f = fit_line(&pts).unwrap();
        prop_assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reverse_slopes_multiply_to_r_squared(vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..30)) {
        let x: BTreeMap<i32, f64> = vals.iter().enumerate().map(|(i, v)| (2000 + i as i32, v.0)).collect();
        let y: BTreeMap<i32, f64> = vals.iter().enumerate().map(|(i, v)| (2000 + i as i32, v.1)).collect();
        let xs = IESeries::predicted("x", 2000, x).unwrap();
        let ys = IESeries::predicted("y", 2000, y).unwrap();
        let phase = Phase::new("all", 2000, 2100).unwrap();
        let (Ok(yx), Ok(xy)) = (fit_elasticity(&ys, &xs, &phase), fit_elasticity(&xs, &ys, &phase)) else {
            return Ok(());
        };
        prop_assert!((yx.slope() * xy.slope() - yx.fit.r_squared).abs() < 1e-9);
        prop_assert!((yx.fit.r_squared - xy.fit.r_squared).abs() < 1e-9);
    }
}

#[test]
fn growth_recovers_planted_lambda() {
    for lambda in [-0.05, 0.0, 0.01, 0.021, 0.1] {
        let s = gen_exponential(&SyntheticSpec::exact(lambda, 2000, 20));
        let ie = ie_transform(&s, 2000).unwrap();
        for phase in Phase::uk_default() {
            let g = fit_growth(&ie, &phase).unwrap();
            assert!((g.lambda - lambda).abs() < 1e-10, "lambda {lambda} in {phase}: {}", g.lambda);
        }
    }
}

#[test]
fn noisy_growth_within_three_standard_errors() {
    // True sampling SE of the slope is sigma / sqrt(Sxx); a 3-sigma miss has
    // probability ~0.27% per trial, so a handful of misses in 200 is allowed.
    let sigma = 0.002;
    let n = 20;
    let sxx: f64 = {
        let mean = (n - 1) as f64 / 2.0;
        (0..n).map(|t| (t as f64 - mean).powi(2)).sum()
    };
    let se = sigma / sxx.sqrt();
    let phase = Phase::new("all", 2000, 2019).unwrap();
    let mut misses = 0;
    for seed in 0..200 {
        let spec = SyntheticSpec {
            noise_sd: sigma,
            seed,
            ..SyntheticSpec::exact(0.021, 2000, n)
        };
        let ie = ie_transform(&gen_exponential(&spec), 2000).unwrap();
        let g = fit_growth(&ie, &phase).unwrap();
        if (g.lambda - 0.021).abs() > 3.0 * se {
            misses += 1;
        }
    }
    assert!(misses <= 3, "{misses} of 200 trials outside 3 SE");
}
