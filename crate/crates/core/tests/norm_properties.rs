use approx::assert_relative_eq;
use orlicz_core::orlicz::{
    holder_check, luxemburg_norm, luxemburg_of_magnitudes, modular, modular_of, orlicz_norm, weighted_norm,
    NormKind,
};
use orlicz_core::sampling::{cell_rng, random_fn};
use orlicz_core::weight::{make_weight, WeightSpec};
use orlicz_core::young::{catalog, lookup, YoungFunction, YoungSpec};
use orlicz_core::{Complex64, FinSuppFn};
use proptest::prelude::*;

fn sample(seed: u64, trial: u64, dim: usize, radius: u64, support: usize) -> FinSuppFn {
    let mut rng = cell_rng(seed, 0, radius, trial);
    random_fn(&mut rng, dim, radius, support)
}

/// `p^{-1/p} ||f||_p` computed directly from the entries.
fn power_oracle(p: f64, f: &FinSuppFn) -> f64 {
    let s: f64 = f.magnitudes().iter().map(|m| m.powf(p)).sum();
    s.powf(1.0 / p) * p.powf(-1.0 / p)
}

#[test]
fn luxemburg_matches_power_closed_form() {
    for p in [1.25, 1.5, 2.0, 3.0] {
        let phi = YoungFunction::power(p).unwrap();
        for trial in 0..40 {
            let f = sample(3, trial, 1 + (trial as usize % 2), 10, 50);
            assert_relative_eq!(
                luxemburg_norm(&phi, &f).unwrap(),
                power_oracle(p, &f),
                max_relative = 1e-8
            );
        }
    }
}

#[test]
fn luxemburg_is_tight() {
    let phi = YoungFunction::cosh_minus_one();
    for trial in 0..20 {
        let f = sample(5, trial, 2, 6, 20);
        let n = luxemburg_norm(&phi, &f).unwrap();
        let mags = f.magnitudes();
        let at = |k: f64| modular_of(&phi, &mags.iter().map(|m| m / k).collect::<Vec<_>>());
        assert!(at(n) <= 1.0);
        assert!(at(n * (1.0 - 1e-9)) > 1.0);
        let scaled = modular(&phi, &f.scale(Complex64::new(1.0 / n, 0.0)));
        assert!(scaled <= 1.0 + 1e-12);
    }
}

#[test]
fn norm_sandwich_for_catalog() {
    for pair in catalog() {
        for trial in 0..6 {
            let f = sample(9, trial, 1, 8, 6);
            let n = luxemburg_norm(&pair.phi, &f).unwrap();
            let o = orlicz_norm(&pair, &f).unwrap();
            assert!(n <= o * (1.0 + 1e-9) && o <= 2.0 * n * (1.0 + 1e-9), "{}", pair.id());
        }
    }
}

#[test]
fn holder_for_catalog() {
    for pair in catalog() {
        for trial in 0..4 {
            let f = sample(13, trial, 1, 5, 6);
            let g = sample(14, trial, 1, 5, 6);
            let r = holder_check(&pair, &f, &g).unwrap();
            assert!(r.ok, "{}: {r:?}", pair.id());
        }
    }
}

#[test]
fn weighted_norm_kinds_are_consistent() {
    let pair = lookup(&YoungSpec::new("power", Some(1.5))).unwrap();
    let w = make_weight(&WeightSpec::SubexpAlpha { alpha: 0.5, c: 1.0 }).unwrap();
    let f = sample(21, 0, 2, 4, 8);
    let lux = weighted_norm(&pair, &w, &f, NormKind::Luxemburg).unwrap();
    let orl = weighted_norm(&pair, &w, &f, NormKind::Orlicz).unwrap();
    assert!(lux <= orl * (1.0 + 1e-9) && orl <= 2.0 * lux * (1.0 + 1e-9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn luxemburg_is_homogeneous(c in 0.01f64..100.0, trial in 0u64..1000) {
        let phi = YoungFunction::entropy();
        let f = sample(31, trial, 1, 10, 8);
        let a = luxemburg_norm(&phi, &f.scale(Complex64::new(c, 0.0))).unwrap();
        let b = c * luxemburg_norm(&phi, &f).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * b);
    }

    #[test]
    fn luxemburg_triangle_inequality(trial in 0u64..1000) {
        let phi = YoungFunction::x2log_pow(1.0).unwrap();
        let f = sample(41, trial, 1, 6, 8);
        let g = sample(42, trial, 1, 6, 8);
        let lhs = luxemburg_norm(&phi, &f.plus(&g)).unwrap();
        let rhs = luxemburg_norm(&phi, &f).unwrap() + luxemburg_norm(&phi, &g).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-10));
    }

    #[test]
    fn luxemburg_is_monotone(mags in prop::collection::vec(0.0f64..10.0, 1..20), bump in 0.0f64..5.0) {
        let phi = YoungFunction::power(2.5).unwrap();
        let mut bigger = mags.clone();
        bigger[0] += bump;
        let a = luxemburg_of_magnitudes(&phi, &mags).unwrap();
        let b = luxemburg_of_magnitudes(&phi, &bigger).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12));
    }
}
