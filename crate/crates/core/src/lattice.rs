//! Geometry of `Z^d` under the box generating set `{-1, 0, 1}^d`.
//!
//! The word length with respect to the box is the sup-norm `max |x_i|`, so
//! the `n`-ball is the cube `[-n, n]^d` with `(2n+1)^d` points.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on enumerated ball points.
pub const DEFAULT_BALL_BUDGET: u128 = 20_000_000;

/// A point of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn zero(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    /// `k` times the first basis vector.
    pub fn axis(dim: usize, k: i64) -> Self {
        let mut v = vec![0; dim];
        v[0] = k;
        Point(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|a| -a).collect())
    }
}

/// Box word length `max_i |x_i|`.
pub fn word_length(x: &Point) -> u64 {
    x.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
}

/// `(2n+1)^d` as an exact integer, saturating.
pub fn ball_size(dim: usize, n: u64) -> u128 {
    let side = 2 * n as u128 + 1;
    (0..dim).fold(1u128, |acc, _| acc.saturating_mul(side))
}

/// Number of points of word length exactly `n`.
pub fn shell_size(dim: usize, n: u64) -> u128 {
    if n == 0 {
        1
    } else {
        ball_size(dim, n) - ball_size(dim, n - 1)
    }
}

/// Shell size as a float, valid far beyond the integer range.
pub fn shell_size_f64(dim: usize, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let d = dim as i32;
    let n = n as f64;
    if n < 1e6 {
        shell_size(dim, n as u64) as f64
    } else {
        (2.0 * n + 1.0).powi(d) - (2.0 * n - 1.0).powi(d)
    }
}

/// Points of word length `<= n`, lexicographically ordered.
pub fn ball(dim: usize, n: u64, budget: u128) -> Result<Vec<Point>> {
    let size = ball_size(dim, n);
    if size > budget {
        return Err(Error::ResourceLimit {
            what: "ball enumeration",
            needed: size,
            budget,
        });
    }
    let n = n as i64;
    let mut out = Vec::with_capacity(size as usize);
    let mut cur = vec![-n; dim];
    loop {
        out.push(Point(cur.clone()));
        // Odometer increment from the last coordinate keeps lexicographic order.
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                break;
            }
            cur[i] = -n;
        }
    }
}

/// Points of word length exactly `n`.
pub fn shell(dim: usize, n: u64, budget: u128) -> Result<Vec<Point>> {
    Ok(ball(dim, n, budget)?
        .into_iter()
        .filter(|p| word_length(p) == n)
        .collect())
}
