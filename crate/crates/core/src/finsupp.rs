//! Finitely supported complex functions on `Z^d`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::lattice::Point;

/// A finitely supported function `Z^d -> C`; zero entries are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FinSuppFn {
    dim: usize,
    entries: BTreeMap<Point, Complex64>,
}

impl FinSuppFn {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "lattice dimension must be positive");
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from `(point, value)` pairs, summing repeated points.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (Point, Complex64)>,
    ) -> Result<Self> {
        if dim == 0 {
            return invalid("lattice dimension must be positive");
        }
        let mut f = Self::zero(dim);
        for (p, v) in entries {
            if p.dim() != dim {
                return invalid(format!("point {p:?} does not have dimension {dim}"));
            }
            f.add_at(p, v);
        }
        Ok(f)
    }

    pub fn delta(at: Point, value: Complex64) -> Self {
        let mut f = Self::zero(at.dim());
        f.add_at(at, value);
        f
    }

    /// Indicator of a set of points (repeated points count once).
    pub fn indicator<'a>(dim: usize, points: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut f = Self::zero(dim);
        for p in points {
            assert_eq!(p.dim(), dim);
            f.entries.insert(p.clone(), Complex64::new(1.0, 0.0));
        }
        f
    }

    /// Adds `v` at `p`, dropping the entry if the sum is exactly zero.
    pub fn add_at(&mut self, p: Point, v: Complex64) {
        debug_assert_eq!(p.dim(), self.dim);
        if v == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.entries.entry(p) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if *e.get() == Complex64::new(0.0, 0.0) {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: &Point) -> Complex64 {
        self.entries.get(p).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &Complex64)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.entries.keys()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.entries.values().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (p, v) in &self.entries {
            out.add_at(p.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (p, v) in &other.entries {
            out.add_at(p.clone(), *v);
        }
        out
    }

    /// Pointwise product.
    pub fn times(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (p, v) in &small.entries {
            if let Some(w) = large.entries.get(p) {
                out.add_at(p.clone(), v * w);
            }
        }
        out
    }

    /// Pointwise product with a real evaluator.
    pub fn map_weighted(&self, w: impl Fn(&Point) -> f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (p, v) in &self.entries {
            out.add_at(p.clone(), v * w(p));
        }
        out
    }

    /// Bilinear pairing `sum u(s) w(s)` (no conjugation).
    pub fn pairing(&self, other: &Self) -> Complex64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(p, v)| large.entries.get(p).map(|w| v * w))
            .sum()
    }

    /// `x -> f(-x)`.
    pub fn flip(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|(p, v)| (-p, *v)).collect(),
        }
    }

    /// `x -> f(x - a)`, i.e. convolution with `delta_a`.
    pub fn translate(&self, a: &Point) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|(p, v)| (p + a, *v)).collect(),
        }
    }

    /// Max-norm distance, used for approximate comparisons.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for (p, v) in &self.entries {
            worst = worst.max((v - other.get(p)).norm());
        }
        for (p, v) in &other.entries {
            if !self.entries.contains_key(p) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    dim: usize,
    entries: Vec<(Vec<i64>, [f64; 2])>,
}

impl Serialize for FinSuppFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(p, v)| (p.0.clone(), [v.re, v.im]))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinSuppFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        FinSuppFn::from_entries(
            wire.dim,
            wire.entries
                .into_iter()
                .map(|(p, [re, im])| (Point(p), Complex64::new(re, im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
