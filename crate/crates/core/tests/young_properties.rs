use approx::assert_relative_eq;
use orlicz_core::grid::{log_grid, working_grid};
use orlicz_core::young::{
    catalog, conjugate, delta2_estimate, inverse, lookup, make_pair, Delta2, YoungFunction,
    YoungSpec,
};
use proptest::prelude::*;

/// Grid search for `sup x y - phi(x)` on a dense log grid around the
/// maximiser, independent of the bracket/ternary implementation.
fn brute_conjugate(phi: &YoungFunction, y: f64) -> f64 {
    let xs = log_grid(1e-8, 1e4, 200_001);
    xs.iter().map(|&x| x * y - phi.eval(x)).fold(0.0, f64::max)
}

#[test]
fn power_conjugates_match_dual_power() {
    let ys = log_grid(1e-3, 1e2, 40);
    for p in [1.25, 1.5, 2.0, 3.0, 4.0] {
        let phi = YoungFunction::power(p).unwrap();
        let q = p / (p - 1.0);
        for &y in &ys {
            let expected = y.powf(q) / q;
            assert_relative_eq!(conjugate(&phi, y).unwrap(), expected, max_relative = 1e-6);
        }
    }
}

#[test]
fn entropy_conjugate_matches_exponential() {
    let phi = YoungFunction::entropy();
    for y in log_grid(1e-3, 5.0, 40) {
        assert_relative_eq!(conjugate(&phi, y).unwrap(), y.exp_m1() - y, max_relative = 1e-6);
    }
}

#[test]
fn conjugate_agrees_with_grid_search() {
    for phi in [
        YoungFunction::cosh_minus_one(),
        YoungFunction::x2log_pow(1.0).unwrap(),
        YoungFunction::cosh_pow(1.5).unwrap(),
    ] {
        for y in [0.1, 0.7, 2.0, 6.0] {
            let v = conjugate(&phi, y).unwrap();
            let b = brute_conjugate(&phi, y);
            assert!(v >= b - 1e-12 * (1.0 + b), "{phi} y={y}: {v} < {b}");
            assert_relative_eq!(v, b, max_relative = 1e-6, epsilon = 1e-12);
        }
    }
}

#[test]
fn biconjugation_returns_original() {
    for phi in [
        YoungFunction::power(1.5).unwrap(),
        YoungFunction::cosh_minus_one(),
        YoungFunction::entropy(),
    ] {
        let once = phi.numerical_conjugate();
        let twice = once.numerical_conjugate();
        for x in [0.05, 0.5, 1.0, 3.0] {
            assert_relative_eq!(twice.eval(x), phi.eval(x), max_relative = 1e-6);
        }
    }
}

#[test]
fn catalog_pairs_validate() {
    let pairs = catalog();
    assert!(pairs.len() >= 11);
    for pair in &pairs {
        pair.validate().unwrap_or_else(|e| panic!("{}: {e}", pair.id()));
        let xs = log_grid(1e-3, 1e2, 50);
        let young = pair.check_young_inequality(&xs, &xs);
        assert!(young.ok, "{}: {young:?}", pair.id());
    }
}

#[test]
fn make_pair_uses_closed_form_when_known() {
    let pair = make_pair(YoungFunction::power(3.0).unwrap()).unwrap();
    assert_relative_eq!(pair.psi.eval(2.0), 2f64.powf(1.5) / 1.5, max_relative = 1e-14);
    let pair = lookup(&YoungSpec::new("exp_linear", Some(2.0))).unwrap();
    assert!(pair.phi.is_numerical_conjugate());
}

#[test]
fn delta2_separates_power_from_exponential() {
    assert!(matches!(
        delta2_estimate(&YoungFunction::cosh_pow(1.5).unwrap(), 50.0).unwrap(),
        Delta2::Unbounded
    ));
    assert!(matches!(
        delta2_estimate(&YoungFunction::power(1.25).unwrap(), 1e3).unwrap(),
        Delta2::Bounded(_)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn young_inequality_random_points(idx in 0usize..11, x in 1e-4f64..1e2, y in 1e-4f64..1e2) {
        let pair = &catalog()[idx];
        let lhs = x * y;
        let rhs = pair.phi.eval(x) + pair.psi.eval(y);
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + lhs), "{}: {lhs} > {rhs}", pair.id());
    }

    #[test]
    fn inverse_sandwich_random_points(idx in 0usize..11, x in 1e-5f64..1e3) {
        let pair = &catalog()[idx];
        let prod = inverse(&pair.phi, x).unwrap() * inverse(&pair.psi, x).unwrap();
        prop_assert!(x <= prod * (1.0 + 1e-8) && prod <= 2.0 * x * (1.0 + 1e-8),
            "{}: x={x} prod={prod}", pair.id());
    }

    #[test]
    fn inverse_round_trips(p in 1.1f64..5.0, y in 1e-6f64..1e6) {
        let phi = YoungFunction::power(p).unwrap();
        let x = inverse(&phi, y).unwrap();
        prop_assert!((phi.eval(x) - y).abs() <= 1e-12 * y);
    }

    #[test]
    fn conjugate_is_convex_and_nondecreasing(p in 1.2f64..4.0, a in 0.01f64..5.0, b in 0.01f64..5.0) {
        let phi = YoungFunction::power(p).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mid = 0.5 * (lo + hi);
        let (fl, fm, fh) = (
            conjugate(&phi, lo).unwrap(),
            conjugate(&phi, mid).unwrap(),
            conjugate(&phi, hi).unwrap(),
        );
        prop_assert!(fl <= fh * (1.0 + 1e-9));
        prop_assert!(fm <= 0.5 * (fl + fh) * (1.0 + 1e-8) + 1e-14);
    }
}

#[test]
fn working_grid_sandwich_for_catalog() {
    for pair in catalog() {
        let c = pair.check_inverse_sandwich(&working_grid(40)).unwrap();
        assert!(c.ok, "{}: {c:?}", pair.id());
    }
}
