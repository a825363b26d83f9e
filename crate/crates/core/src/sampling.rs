//! Seeded test-function generators for the empirical scans.
//!
//! Every draw comes from its own ChaCha8 stream keyed by
//! `(seed, tag, radius, trial)`, so results do not depend on the order in
//! which trials are evaluated.
//!
//! Random functions: support size uniform in `1..=max_support`, points
//! uniform in `ball(radius)`, values `|N(0,1)| e^{i theta}` with `theta`
//! uniform in `[0, 2 pi)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::finsupp::FinSuppFn;
use crate::lattice::{ball, ball_size, Point};
use crate::weight::Weight;

/// Default cap on random support sizes.
pub const DEFAULT_MAX_SUPPORT: usize = 8;
/// Largest ball used as a whole-ball adversarial candidate.
pub const ADVERSARIAL_BALL_CAP: u128 = 4096;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for one cell of an experiment.
pub fn cell_rng(seed: u64, tag: u64, radius: u64, trial: u64) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for part in [tag, radius, trial] {
        h = splitmix(h ^ part);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Stable tag for an operation name.
pub fn tag_of(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn random_point<R: Rng>(rng: &mut R, dim: usize, radius: u64) -> Point {
    let r = radius as i64;
    Point((0..dim).map(|_| rng.random_range(-r..=r)).collect())
}

pub fn random_value<R: Rng>(rng: &mut R) -> Complex64 {
    let m: f64 = rng.sample::<f64, _>(StandardNormal).abs();
    let theta = rng.random_range(0.0..TAU);
    Complex64::from_polar(m, theta)
}

/// A random nonzero function supported in `ball(radius)`.
pub fn random_fn<R: Rng>(rng: &mut R, dim: usize, radius: u64, max_support: usize) -> FinSuppFn {
    loop {
        let k = rng.random_range(1..=max_support.max(1));
        let f = FinSuppFn::from_entries(
            dim,
            (0..k).map(|_| (random_point(rng, dim, radius), random_value(rng))),
        )
        .expect("points have the requested dimension");
        if !f.is_empty() {
            return f;
        }
    }
}

/// Points `k e_1`, `0 <= k <= radius`.
fn axis_points(dim: usize, radius: u64) -> impl Iterator<Item = Point> {
    (0..=radius as i64).map(move |k| Point::axis(dim, k))
}

fn line_profile(dim: usize, radius: u64, value: impl Fn(&Point) -> f64) -> FinSuppFn {
    let mut f = FinSuppFn::zero(dim);
    for p in axis_points(dim, radius) {
        let v = value(&p);
        if v != 0.0 && v.is_finite() {
            f.add_at(p, Complex64::new(v, 0.0));
        }
    }
    f
}

/// Block widths used for the far-out block candidates.
const BLOCK_WIDTHS: [i64; 3] = [2, 3, 5];

/// Deterministic candidates for the unbounded direction of a bilinear form:
/// opposite atoms `(delta_{k e1}, delta_{-k e1})`, short blocks on the
/// first axis paired with their flips, ball indicators,
/// `1/w` profiles and, if `xi` is given, `xi/w^2` profiles, each paired
/// with itself and with its flip.
pub fn adversarial_pairs(
    dim: usize,
    radius: u64,
    omega: &Weight,
    xi: Option<&dyn Fn(&Point) -> f64>,
) -> Vec<(FinSuppFn, FinSuppFn)> {
    let one = Complex64::new(1.0, 0.0);
    let mut pairs = Vec::new();
    for p in axis_points(dim, radius) {
        let f = FinSuppFn::delta(p.clone(), one);
        let g = FinSuppFn::delta(-&p, one);
        pairs.push((f.clone(), f.clone()));
        pairs.push((f, g));
    }
    for k in 0..=radius as i64 {
        for w in BLOCK_WIDTHS {
            if k + w - 1 > radius as i64 {
                continue;
            }
            let pts: Vec<Point> = (k..k + w).map(|j| Point::axis(dim, j)).collect();
            let f = FinSuppFn::indicator(dim, &pts);
            let g = f.flip();
            pairs.push((f, g));
        }
    }

    let mut profiles = Vec::new();
    let mut m = 1;
    while m <= radius {
        if ball_size(dim, m) <= ADVERSARIAL_BALL_CAP {
            if let Ok(pts) = ball(dim, m, ADVERSARIAL_BALL_CAP) {
                profiles.push(FinSuppFn::indicator(dim, &pts));
            }
        }
        profiles.push(line_profile(dim, m, |_| 1.0));
        profiles.push(line_profile(dim, m, |p| 1.0 / omega.eval(p)));
        if let Some(xi) = xi {
            profiles.push(line_profile(dim, m, |p| xi(p) / omega.eval(p).powi(2)));
        }
        m *= 2;
    }
    for f in profiles {
        if f.is_empty() {
            continue;
        }
        let flipped = f.flip();
        pairs.push((f.clone(), f.clone()));
        pairs.push((f, flipped));
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::word_length;
    use crate::weight::{make_weight, WeightSpec};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = cell_rng(7, 1, 16, 3).random();
        let b: u64 = cell_rng(7, 1, 16, 3).random();
        let c: u64 = cell_rng(7, 1, 16, 4).random();
        let d: u64 = cell_rng(8, 1, 16, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_ne!(tag_of("submult"), tag_of("derivation"));
    }

    #[test]
    fn random_fn_respects_radius_and_support() {
        let mut rng = cell_rng(1, 0, 0, 0);
        for _ in 0..200 {
            let f = random_fn(&mut rng, 2, 5, 8);
            assert!(!f.is_empty() && f.len() <= 8);
            assert!(f.support().all(|p| word_length(p) <= 5));
        }
    }

    #[test]
    fn adversarial_pool_contains_opposite_atoms() {
        let w = make_weight(&WeightSpec::Polynomial { beta: 0.5 }).unwrap();
        let xi = |p: &Point| p.coords()[0] as f64;
        let pairs = adversarial_pairs(1, 16, &w, Some(&xi));
        let one = Complex64::new(1.0, 0.0);
        let target = (
            FinSuppFn::delta(Point(vec![16]), one),
            FinSuppFn::delta(Point(vec![-16]), one),
        );
        assert!(pairs.contains(&target));
        assert!(pairs.iter().all(|(f, g)| !f.is_empty() && !g.is_empty()));
    }
}
