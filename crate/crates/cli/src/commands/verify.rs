use serde::Deserialize;

use orlicz_core::algebra::{sqrt_conjugate_grid, sqrt_conjugate_inequality_check};
use orlicz_core::grid::log_grid;
use orlicz_core::orlicz::{holder_check, luxemburg_norm, orlicz_norm};
use orlicz_core::sampling::{cell_rng, random_fn, tag_of, DEFAULT_MAX_SUPPORT};
use orlicz_core::young::{catalog_specs, lookup, GridCheck};
use orlicz_core::{ComplementaryPair, Error as CoreError};

use super::{check_dim, metadata, Outcome};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Cell, ReportTable};

pub const COLUMNS: &[&str] = &["invariant", "pair", "status", "checked", "failures", "worst_margin"];

pub const INVARIANTS: &[&str] = &[
    "young_inequality",
    "inverse_sandwich",
    "norm_sandwich",
    "holder",
    "sqrt_conjugate_inequality",
];

/// Support radius of the random functions used for the norm rows.
const SAMPLE_RADIUS: u64 = 8;

#[derive(Debug, Deserialize)]
struct VerifyConfig {
    /// Family ids to keep; all of the catalog when absent.
    #[serde(default)]
    families: Option<Vec<String>>,
    /// Multiplies `psi` before checking (corruption switch for testing the battery).
    #[serde(default)]
    psi_scale: Option<f64>,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_dim")]
    dim: usize,
}

fn default_samples() -> usize {
    20
}

fn default_dim() -> usize {
    1
}

/// Tally of `lhs <= rhs + tol` instances.
#[derive(Debug, Clone, Copy)]
struct Tally {
    checked: usize,
    failures: usize,
    worst_margin: f64,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.checked += 1;
        let margin = (rhs + tol - lhs) / (1.0 + rhs.abs());
        if !(lhs <= rhs + tol) {
            self.failures += 1;
        }
        if margin < self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
        }
    }

    fn record_error(&mut self) {
        self.checked += 1;
        self.failures += 1;
        self.worst_margin = f64::NEG_INFINITY;
    }
}

impl From<GridCheck> for Tally {
    fn from(g: GridCheck) -> Self {
        Self {
            checked: g.checked,
            failures: g.failures,
            worst_margin: g.worst_margin,
        }
    }
}

fn young_rows(pair: &ComplementaryPair) -> Tally {
    let g = log_grid(1e-3, 1e2, 50);
    pair.check_young_inequality(&g, &g).into()
}

fn inverse_rows(pair: &ComplementaryPair) -> Tally {
    match pair.check_inverse_sandwich(&log_grid(1e-6, 1e3, 40)) {
        Ok(g) => g.into(),
        Err(_) => {
            let mut t = Tally::new();
            t.record_error();
            t
        }
    }
}

fn sample_fns(seed: u64, op: &str, dim: usize, n: usize) -> Vec<orlicz_core::FinSuppFn> {
    (0..n as u64)
        .map(|i| random_fn(&mut cell_rng(seed, tag_of(op), SAMPLE_RADIUS, i), dim, SAMPLE_RADIUS, DEFAULT_MAX_SUPPORT))
        .collect()
}

/// `N(f) <= ||f|| <= 2 N(f)` on seeded random `f`.
fn norm_sandwich_rows(pair: &ComplementaryPair, seed: u64, dim: usize, n: usize) -> Tally {
    let mut t = Tally::new();
    for f in sample_fns(seed, "norm_sandwich", dim, n) {
        match (luxemburg_norm(&pair.phi, &f), orlicz_norm(pair, &f)) {
            (Ok(lux), Ok(orl)) => {
                let tol = 1e-8 * (1.0 + lux);
                t.record(lux, orl, tol);
                t.record(orl, 2.0 * lux, tol);
            }
            _ => t.record_error(),
        }
    }
    t
}

fn holder_rows(pair: &ComplementaryPair, seed: u64, dim: usize, n: usize) -> Tally {
    let mut t = Tally::new();
    let fs = sample_fns(seed, "holder_f", dim, n);
    let gs = sample_fns(seed, "holder_g", dim, n);
    for (f, g) in fs.iter().zip(&gs) {
        match holder_check(pair, f, g) {
            Ok(r) => t.record(r.lhs, r.rhs, 1e-8),
            Err(_) => t.record_error(),
        }
    }
    t
}

fn push(t: &mut ReportTable, invariant: &str, pair: &str, tally: Option<Tally>) -> bool {
    match tally {
        Some(x) => {
            let pass = x.failures == 0;
            t.push(vec![
                invariant.into(),
                pair.into(),
                if pass { "pass" } else { "fail" }.into(),
                x.checked.into(),
                x.failures.into(),
                x.worst_margin.into(),
            ]);
            pass
        }
        None => {
            t.push(vec![
                invariant.into(),
                pair.into(),
                "not_applicable".into(),
                0usize.into(),
                0usize.into(),
                Cell::Null,
            ]);
            true
        }
    }
}

/// One row per (invariant, catalog pair).
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c: VerifyConfig = cfg.parse()?;
    check_dim(c.dim)?;
    if let Some(s) = c.psi_scale {
        if !(s > 0.0 && s.is_finite()) {
            return Err(CliError::Config(format!("psi_scale must be positive, got {s}")));
        }
    }
    let specs: Vec<_> = catalog_specs()
        .into_iter()
        .filter(|s| c.families.as_ref().is_none_or(|fs| fs.contains(&s.family)))
        .collect();
    if let Some(fs) = &c.families {
        let known = catalog_specs();
        if let Some(bad) = fs.iter().find(|f| !known.iter().any(|s| &s.family == *f)) {
            return Err(CliError::Config(format!("unknown family '{bad}' in families")));
        }
    }

    let mut pairs = Vec::with_capacity(specs.len());
    for s in &specs {
        let pair = lookup(s)?;
        pairs.push(match c.psi_scale {
            Some(k) => ComplementaryPair::from_parts(
                format!("{}~psi_x{k}", pair.id()),
                pair.phi.clone(),
                pair.psi.rescaled(1.0, k)?,
                pair.mode,
            ),
            None => pair,
        });
    }

    let mut t = ReportTable::new(COLUMNS, metadata(cfg));
    let mut failed = Vec::new();
    for pair in &pairs {
        let sqrt = match sqrt_conjugate_inequality_check(pair, &sqrt_conjugate_grid()) {
            Ok(g) => Some(g.into()),
            Err(CoreError::PreconditionFailure(_)) => None,
            Err(_) => {
                let mut x = Tally::new();
                x.record_error();
                Some(x)
            }
        };
        let rows = [
            Some(young_rows(pair)),
            Some(inverse_rows(pair)),
            Some(norm_sandwich_rows(pair, cfg.seed, c.dim, c.samples)),
            Some(holder_rows(pair, cfg.seed, c.dim, c.samples)),
            sqrt,
        ];
        for (inv, tally) in INVARIANTS.iter().zip(rows) {
            if !push(&mut t, inv, pair.id(), tally) {
                failed.push(format!("{inv}/{}", pair.id()));
            }
        }
    }
    Ok(Outcome {
        table: t,
        failure: (!failed.is_empty()).then(|| format!("failed rows: {}", failed.join(", "))),
    })
}
