//! Heuristic convergence verdicts for nonnegative series from finitely many terms.
//!
//! No finite computation proves convergence; the verdict is three-way so
//! that callers can tell evidence from a guess.

use serde::Serialize;

/// Ratio below which the tail counts as geometrically decaying.
pub const RATIO_CUTOFF: f64 = 1.0 - 1e-3;
/// Number of trailing ratios inspected.
pub const TAIL_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum SeriesVerdict {
    Converges { estimate: f64 },
    Diverges,
    Inconclusive,
}

impl SeriesVerdict {
    pub fn converges(&self) -> bool {
        matches!(self, SeriesVerdict::Converges { .. })
    }
}

/// Least-squares slope of `log t_n` against `log n` over the last decade of
/// indices (`n >= len/10`), skipping zero terms.
pub fn tail_loglog_slope(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    if n < 20 {
        return None;
    }
    let start = (n / 10).max(1);
    let pts: Vec<(f64, f64)> = (start..n)
        .filter(|&i| terms[i] > 0.0 && terms[i].is_finite())
        .map(|i| ((i as f64).ln(), terms[i].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in &pts {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    (den > 0.0).then(|| num / den)
}

/// Verdict for `sum terms[n]` (all terms nonnegative, `terms[n]` is the
/// `n`-th shell contribution).
///
/// * trailing terms all zero (underflow) or trailing ratios all below
///   [`RATIO_CUTOFF`]: converges;
/// * trailing terms nondecreasing: diverges;
/// * otherwise compare against p-series through the log-log tail slope
///   (`< -1.05` converges, `> -0.95` diverges);
/// * else inconclusive.
pub fn classify_terms(terms: &[f64]) -> SeriesVerdict {
    let estimate: f64 = terms.iter().sum();
    if terms.len() <= TAIL_LEN {
        return SeriesVerdict::Inconclusive;
    }
    if terms.iter().any(|t| t.is_nan()) || estimate.is_infinite() {
        return SeriesVerdict::Diverges;
    }
    let tail = &terms[terms.len() - TAIL_LEN - 1..];
    if tail.iter().all(|&t| t == 0.0) {
        return SeriesVerdict::Converges { estimate };
    }
    let ratios: Vec<f64> = tail
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY })
        .collect();
    if ratios.iter().all(|&r| r < RATIO_CUTOFF) {
        return SeriesVerdict::Converges { estimate };
    }
    if ratios.iter().all(|&r| r >= 1.0) {
        return SeriesVerdict::Diverges;
    }
    match tail_loglog_slope(terms) {
        Some(s) if s < -1.05 => SeriesVerdict::Converges { estimate },
        Some(s) if s > -0.95 => SeriesVerdict::Diverges,
        _ => SeriesVerdict::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_converges() {
        let t: Vec<f64> = (0..100).map(|n| 0.9f64.powi(n)).collect();
        let v = classify_terms(&t);
        assert!(v.converges());
        if let SeriesVerdict::Converges { estimate } = v {
            assert!((estimate - (1.0 - 0.9f64.powi(100)) / 0.1).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_diverges() {
        assert_eq!(classify_terms(&[1.0; 50]), SeriesVerdict::Diverges);
    }

    #[test]
    fn p_series_use_slope() {
        let conv: Vec<f64> = (0..5000).map(|n| (1.0 + n as f64).powf(-1.5)).collect();
        assert!(classify_terms(&conv).converges());
        let div: Vec<f64> = (0..5000).map(|n| (1.0 + n as f64).powf(-0.3)).collect();
        assert_eq!(classify_terms(&div), SeriesVerdict::Diverges);
        let border: Vec<f64> = (0..5000).map(|n| (1.0 + n as f64).powf(-1.0)).collect();
        assert_eq!(classify_terms(&border), SeriesVerdict::Inconclusive);
    }

    #[test]
    fn underflowed_tail_converges() {
        let mut t = vec![1.0, 0.5, 0.1];
        t.extend(std::iter::repeat_n(0.0, 20));
        assert!(classify_terms(&t).converges());
    }

    #[test]
    fn too_short_is_inconclusive() {
        assert_eq!(classify_terms(&[1.0, 0.5]), SeriesVerdict::Inconclusive);
    }
}
