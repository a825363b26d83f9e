//! Sampling grids used by the validation and probe routines.

/// Lower end of the working range used by grid validations.
pub const WORK_MIN: f64 = 1e-6;
/// Upper end of the working range used by grid validations.
pub const WORK_MAX: f64 = 1e3;

/// `n` log-spaced points covering `[lo, hi]` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo, "log_grid needs 0 < lo <= hi");
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + step * i as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// The documented working grid `[1e-6, 1e3]` with `n` points.
pub fn working_grid(n: usize) -> Vec<f64> {
    log_grid(WORK_MIN, WORK_MAX, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn degenerate_sizes() {
        assert!(log_grid(1.0, 2.0, 0).is_empty());
        assert_eq!(log_grid(1.0, 2.0, 1), vec![1.0]);
    }
}
