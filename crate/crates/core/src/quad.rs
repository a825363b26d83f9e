//! Adaptive Simpson quadrature and bracketed bisection.

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to roughly `rel_tol` relative accuracy.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Seed the absolute budget from a coarse 16-panel estimate so that
    // integrands with most of their mass in a corner are not under-resolved.
    let coarse = composite_simpson(&f, a, b, 16).abs().max(whole.abs());
    if !coarse.is_finite() {
        return if coarse.is_nan() { f64::NAN } else { f64::INFINITY };
    }
    let tol = (rel_tol * coarse).max(f64::MIN_POSITIVE);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let x0 = a + h * i as f64;
            let x1 = x0 + h;
            h / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1))
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || !delta.is_finite() || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Bisection for a nondecreasing `f` on `[lo, hi]` with `f(lo) < target <= f(hi)`.
///
/// Runs until the bracket collapses to adjacent floats (or `max_iter`),
/// returning the bracket.
pub fn bisect_increasing<F: Fn(f64) -> f64>(
    f: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    max_iter: usize,
) -> (f64, f64) {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential_integrals() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-12);
        assert!((v - 9.0).abs() < 1e-11);
        let v = integrate(f64::exp, 0.0, 2.0, 1e-12);
        assert!((v - (2f64.exp() - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn overflowing_integrand_terminates() {
        assert_eq!(integrate(f64::exp, 0.0, 1e4, 1e-11), f64::INFINITY);
    }

    #[test]
    fn bisection_finds_sqrt_two() {
        let (lo, hi) = bisect_increasing(|x| x * x, 2.0, 0.0, 2.0, 200);
        assert!(hi - lo <= f64::EPSILON * 2.0);
        assert!((hi - 2f64.sqrt()).abs() < 1e-15);
    }
}
