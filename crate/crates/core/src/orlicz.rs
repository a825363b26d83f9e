//! Modulars, Luxemburg and Orlicz norms of finitely supported functions.
//!
//! On `Z^d` the Haar measure is counting measure, so every integral is a
//! finite sum over the support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finsupp::FinSuppFn;
use crate::quad::bisect_increasing;
use crate::weight::Weight;
use crate::young::{inverse, ComplementaryPair, YoungFunction};

const NORM_BISECT_CAP: usize = 200;
const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Luxemburg,
    Orlicz,
}

/// `sum_s phi(|f(s)|)`.
pub fn modular(phi: &YoungFunction, f: &FinSuppFn) -> f64 {
    modular_of(phi, &f.magnitudes())
}

pub fn modular_of(phi: &YoungFunction, mags: &[f64]) -> f64 {
    mags.iter().map(|&m| phi.eval(m)).sum()
}

fn scaled_modular(phi: &YoungFunction, mags: &[f64], k: f64) -> f64 {
    mags.iter().map(|&m| phi.eval(m / k)).sum()
}

/// `inf { k > 0 : modular(f / k) <= 1 }`.
pub fn luxemburg_norm(phi: &YoungFunction, f: &FinSuppFn) -> Result<f64> {
    luxemburg_of_magnitudes(phi, &f.magnitudes())
}

/// Luxemburg norm of a nonnegative vector. The returned `k` always
/// satisfies `modular(mags / k) <= 1`.
pub fn luxemburg_of_magnitudes(phi: &YoungFunction, mags: &[f64]) -> Result<f64> {
    let mags: Vec<f64> = mags.iter().copied().filter(|&m| m > 0.0).collect();
    if mags.is_empty() {
        return Ok(0.0);
    }
    let m = mags.iter().copied().fold(0.0, f64::max);
    let n = mags.len() as f64;
    // Below `lo` the largest entry alone exceeds the budget; at `hi` every
    // entry fits into 1/n of it.
    let mut lo = m / inverse(phi, 1.0)?;
    let mut hi = m / inverse(phi, 1.0 / n)?;
    let mut nudges = 0;
    while scaled_modular(phi, &mags, hi) > 1.0 {
        hi *= 1.0 + 1e-12;
        nudges += 1;
        if nudges > NORM_BISECT_CAP {
            return Err(Error::NumericalFailure(format!(
                "{phi}: could not find a feasible Luxemburg bracket"
            )));
        }
    }
    lo = lo.min(hi);
    let mut converged = hi - lo <= 1e-15 * hi;
    for _ in 0..NORM_BISECT_CAP {
        if converged {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if scaled_modular(phi, &mags, mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        converged = hi - lo <= 1e-15 * hi;
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "{phi}: Luxemburg bisection did not converge"
        )));
    }
    Ok(hi)
}

/// `sup { sum |f v| : modular(psi, v) <= 1 }`, checked against
/// `N(f) <= ||f|| <= 2 N(f)`.
pub fn orlicz_norm(pair: &ComplementaryPair, f: &FinSuppFn) -> Result<f64> {
    orlicz_of_magnitudes(pair, &f.magnitudes())
}

pub fn orlicz_of_magnitudes(pair: &ComplementaryPair, mags: &[f64]) -> Result<f64> {
    let mags: Vec<f64> = mags.iter().copied().filter(|&m| m > 0.0).collect();
    if mags.is_empty() {
        return Ok(0.0);
    }
    let lux = luxemburg_of_magnitudes(&pair.phi, &mags)?;
    let in_sandwich = |v: f64| {
        v.is_finite() && lux <= v * (1.0 + SANDWICH_SLACK) && v <= 2.0 * lux * (1.0 + SANDWICH_SLACK)
    };
    if let Some(v) = orlicz_kkt(pair, &mags) {
        if in_sandwich(v) {
            return Ok(v);
        }
    }
    let v = orlicz_coordinate_ascent(pair, &mags)?;
    if in_sandwich(v) {
        Ok(v)
    } else {
        Err(Error::NumericalFailure(format!(
            "{}: Orlicz norm {v} outside [{lux}, {}]",
            pair.id(),
            2.0 * lux
        )))
    }
}

/// First-order construction: `|v(s)| = phi'(|f(s)| / lambda)`, which inverts
/// `psi'`, with `lambda` bisected until the modular constraint binds.
fn orlicz_kkt(pair: &ComplementaryPair, mags: &[f64]) -> Option<f64> {
    let v_at = |lambda: f64| -> Vec<f64> {
        mags.iter()
            .map(|&a| pair.phi.derivative(a / lambda))
            .collect()
    };
    let constraint = |lambda: f64| -> f64 { v_at(lambda).iter().map(|&v| pair.psi.eval(v)).sum() };

    let mut lo = mags.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    let mut hi = lo;
    let mut steps = 0;
    while !(constraint(hi) <= 1.0) {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 {
            return None;
        }
    }
    steps = 0;
    while constraint(lo) <= 1.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 2000 {
            return None;
        }
    }
    // Geometric bisection: smallest feasible lambda.
    for _ in 0..NORM_BISECT_CAP {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if constraint(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let value: f64 = mags.iter().zip(v_at(hi)).map(|(a, v)| a * v).sum();
    value.is_finite().then_some(value)
}

/// Fallback maximiser: the optimum over `v` is the optimum over budget
/// shares `t_s >= 0`, `sum t_s = 1`, of the concave objective
/// `sum a_s psi^{-1}(t_s)`, improved by pairwise exchanges.
pub fn orlicz_coordinate_ascent(pair: &ComplementaryPair, mags: &[f64]) -> Result<f64> {
    let n = mags.len();
    if n == 0 {
        return Ok(0.0);
    }
    let inv = |t: f64| inverse(&pair.psi, t);
    if n == 1 {
        return Ok(mags[0] * inv(1.0)?);
    }
    let mut shares = vec![1.0 / n as f64; n];
    let mut vals: Vec<f64> = shares.iter().map(|&t| inv(t)).collect::<Result<_>>()?;
    let objective = |vals: &[f64]| -> f64 { mags.iter().zip(vals).map(|(a, v)| a * v).sum() };
    let mut current = objective(&vals);
    for _sweep in 0..200 {
        let before = current;
        for i in 0..n {
            for j in i + 1..n {
                let budget = shares[i] + shares[j];
                let h = |u: f64| -> f64 {
                    mags[i] * inv(u).unwrap_or(f64::NAN) + mags[j] * inv(budget - u).unwrap_or(f64::NAN)
                };
                let (mut lo, mut hi) = (0.0, budget);
                for _ in 0..100 {
                    let m1 = lo + (hi - lo) / 3.0;
                    let m2 = hi - (hi - lo) / 3.0;
                    if h(m1) < h(m2) {
                        lo = m1;
                    } else {
                        hi = m2;
                    }
                }
                let u = 0.5 * (lo + hi);
                let old = mags[i] * vals[i] + mags[j] * vals[j];
                if h(u) > old {
                    shares[i] = u;
                    shares[j] = budget - u;
                    vals[i] = inv(u)?;
                    vals[j] = inv(budget - u)?;
                }
            }
        }
        current = objective(&vals);
        if current - before <= 1e-14 * current {
            break;
        }
    }
    Ok(current)
}

/// Norm of the pointwise product `f w`.
pub fn weighted_norm(
    pair: &ComplementaryPair,
    omega: &Weight,
    f: &FinSuppFn,
    kind: NormKind,
) -> Result<f64> {
    let mags: Vec<f64> = f.iter().map(|(p, v)| v.norm() * omega.eval(p)).collect();
    match kind {
        NormKind::Luxemburg => luxemburg_of_magnitudes(&pair.phi, &mags),
        NormKind::Orlicz => orlicz_of_magnitudes(pair, &mags),
    }
}

/// Weighted Luxemburg norm `N_phi(f w)`.
pub fn weighted_luxemburg(phi: &YoungFunction, omega: &Weight, f: &FinSuppFn) -> Result<f64> {
    let mags: Vec<f64> = f.iter().map(|(p, v)| v.norm() * omega.eval(p)).collect();
    luxemburg_of_magnitudes(phi, &mags)
}

/// `sum |f| w`.
pub fn weighted_l1(omega: &Weight, f: &FinSuppFn) -> f64 {
    f.iter().map(|(p, v)| v.norm() * omega.eval(p)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `sum |f g| <= min(N_phi(f) ||g||_psi, ||f||_phi N_psi(g))`.
pub fn holder_check(pair: &ComplementaryPair, f: &FinSuppFn, g: &FinSuppFn) -> Result<HolderReport> {
    if f.dim() != g.dim() {
        return Err(Error::InvalidInput("holder_check needs equal dimensions".into()));
    }
    let lhs: f64 = f.times(g).magnitudes().iter().sum();
    let swapped = pair.swapped();
    let a = luxemburg_norm(&pair.phi, f)? * orlicz_norm(&swapped, g)?;
    let b = orlicz_norm(pair, f)? * luxemburg_norm(&pair.psi, g)?;
    let rhs = a.min(b);
    Ok(HolderReport {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-8,
    })
}

/// `phi^{-1}` by bisection, exposed for closed-form single-atom norms:
/// `N_phi(c delta) = c / phi^{-1}(1)`.
pub fn single_atom_luxemburg(phi: &YoungFunction, c: f64) -> Result<f64> {
    Ok(c.abs() / inverse(phi, 1.0)?)
}

/// Bracketed root of `k -> modular(mags/k) = 1`, kept separate from the
/// production path for tests that want a second route.
pub fn luxemburg_by_root(phi: &YoungFunction, mags: &[f64], lo: f64, hi: f64) -> f64 {
    let (_, hi) = bisect_increasing(|k| -scaled_modular(phi, mags, k), -1.0, lo, hi, 4000);
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Point;
    use crate::weight::{make_weight, WeightSpec};
    use crate::young::{catalog, lookup, YoungSpec};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn power_pair(p: f64) -> ComplementaryPair {
        lookup(&YoungSpec::new("power", Some(p))).unwrap()
    }

    #[test]
    fn modular_examples() {
        let phi = YoungFunction::power(2.0).unwrap();
        assert_eq!(modular(&phi, &FinSuppFn::zero(1)), 0.0);
        let f = FinSuppFn::from_entries(1, [(Point(vec![0]), c(3.0)), (Point(vec![1]), c(4.0))])
            .unwrap();
        assert_relative_eq!(modular(&phi, &f), 12.5, max_relative = 1e-15);
        let e = YoungFunction::exp_minus_linear();
        let d = FinSuppFn::delta(Point(vec![0]), c(1.0));
        assert_relative_eq!(modular(&e, &d), std::f64::consts::E - 2.0, max_relative = 1e-15);
    }

    #[test]
    fn luxemburg_single_atom_closed_form() {
        for p in [1.25, 2.0, 3.5] {
            let phi = YoungFunction::power(p).unwrap();
            let f = FinSuppFn::delta(Point(vec![2]), Complex64::new(0.0, -3.0));
            let expected = 3.0 * p.powf(-1.0 / p);
            assert_relative_eq!(luxemburg_norm(&phi, &f).unwrap(), expected, max_relative = 1e-13);
        }
        let phi = YoungFunction::power(2.0).unwrap();
        assert_eq!(luxemburg_norm(&phi, &FinSuppFn::zero(3)).unwrap(), 0.0);
    }

    #[test]
    fn luxemburg_agrees_with_independent_root() {
        let phi = YoungFunction::cosh_minus_one();
        let mags = [0.3, 1.7, 2.2, 0.01];
        let n = luxemburg_of_magnitudes(&phi, &mags).unwrap();
        let r = luxemburg_by_root(&phi, &mags, 1e-3, 1e3);
        assert_relative_eq!(n, r, max_relative = 1e-12);
        assert!(modular_of(&phi, &mags.map(|m| m / n)) <= 1.0);
    }

    #[test]
    fn orlicz_norm_single_atom_square() {
        let pair = power_pair(2.0);
        let f = FinSuppFn::delta(Point(vec![0]), c(1.0));
        assert_relative_eq!(orlicz_norm(&pair, &f).unwrap(), 2f64.sqrt(), max_relative = 1e-12);
        assert_eq!(orlicz_norm(&pair, &FinSuppFn::zero(1)).unwrap(), 0.0);
    }

    #[test]
    fn orlicz_norm_power_pair_is_dual_norm() {
        // For x^p/p the Orlicz norm is q^{1/q} ||f||_p (Hoelder duality).
        let pair = power_pair(3.0);
        let mags = [1.0, 0.5, 2.0, 0.25];
        let q: f64 = 1.5;
        let lp = mags.iter().map(|m: &f64| m.powi(3)).sum::<f64>().powf(1.0 / 3.0);
        let expected = q.powf(1.0 / q) * lp;
        assert_relative_eq!(orlicz_of_magnitudes(&pair, &mags).unwrap(), expected, max_relative = 1e-10);
        let ascent = orlicz_coordinate_ascent(&pair, &mags).unwrap();
        assert_relative_eq!(ascent, expected, max_relative = 1e-7);
    }

    #[test]
    fn kkt_and_coordinate_ascent_agree_on_entropy() {
        let pair = lookup(&YoungSpec::new("entropy", None)).unwrap();
        let mags = [0.7, 1.9, 0.2];
        let a = orlicz_of_magnitudes(&pair, &mags).unwrap();
        let b = orlicz_coordinate_ascent(&pair, &mags).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-7);
    }

    #[test]
    fn weighted_norm_examples() {
        let pair = power_pair(2.0);
        let f = FinSuppFn::delta(Point(vec![3]), c(1.0));
        let one = crate::weight::Weight::trivial();
        assert_eq!(
            weighted_norm(&pair, &one, &f, NormKind::Luxemburg).unwrap(),
            luxemburg_norm(&pair.phi, &f).unwrap()
        );
        let w = make_weight(&WeightSpec::Polynomial { beta: 1.0 }).unwrap();
        // (1+3) / phi^{-1}(1) with phi^{-1}(1) = sqrt 2.
        let expected = 4.0 / 2f64.sqrt();
        assert_relative_eq!(
            weighted_norm(&pair, &w, &f, NormKind::Luxemburg).unwrap(),
            expected,
            max_relative = 1e-13
        );
    }

    #[test]
    fn holder_examples() {
        let pair = power_pair(2.0);
        let d = FinSuppFn::delta(Point(vec![0]), c(1.0));
        let r = holder_check(&pair, &d, &d).unwrap();
        assert_relative_eq!(r.lhs, 1.0);
        assert!(r.ok && r.rhs >= 1.0);
        let r = holder_check(&pair, &FinSuppFn::zero(1), &d).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.ok);
    }

    #[test]
    fn sandwich_holds_for_catalog_atoms() {
        for pair in catalog() {
            let f = FinSuppFn::from_entries(
                1,
                [(Point(vec![0]), c(0.4)), (Point(vec![5]), Complex64::new(1.0, 1.0))],
            )
            .unwrap();
            let n = luxemburg_norm(&pair.phi, &f).unwrap();
            let o = orlicz_norm(&pair, &f).unwrap();
            assert!(n <= o * (1.0 + 1e-9) && o <= 2.0 * n * (1.0 + 1e-9), "{}", pair.id());
        }
    }
}
