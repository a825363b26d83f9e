//! One module per subcommand. Each takes the merged [`RunConfig`] and
//! returns the rendered report plus an optional invariant-failure message.

use serde::Deserialize;
use serde_json::Value;

use orlicz_core::amenability::Homomorphism;
use orlicz_core::lattice::ball_size;
use orlicz_core::weight::make_weight;
use orlicz_core::young::lookup;
use orlicz_core::{ComplementaryPair, Weight, WeightSpec, YoungSpec};

use crate::config::{Budgets, RunConfig};
use crate::error::CliError;
use crate::report::{Metadata, ReportTable};

pub mod certify;
pub mod classify;
pub mod conjugate;
pub mod derivation;
pub mod norm;
pub mod verify;

/// What a command hands back to the driver.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: ReportTable,
    /// Set when an invariant failed; the report is still emitted.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn ok(table: ReportTable) -> Self {
        Self { table, failure: None }
    }
}

pub fn metadata(cfg: &RunConfig) -> Metadata {
    Metadata {
        command: cfg.command.clone(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Young pair addressed either by `young: {family, p}` or by the shorthand
/// `p` (power family).
#[derive(Debug, Clone, Deserialize)]
pub struct PairSel {
    #[serde(default)]
    pub young: Option<YoungSpec>,
    #[serde(default)]
    pub p: Option<f64>,
}

impl PairSel {
    pub fn resolve(&self) -> Result<ComplementaryPair, CliError> {
        let spec = match (&self.young, self.p) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => YoungSpec::new("power", Some(p)),
            (None, None) => return Err(CliError::Config("missing 'young' (or shorthand 'p')".into())),
        };
        Ok(lookup(&spec)?)
    }
}

/// Weight addressed either by `weight: {family, ...}` or by the shorthand
/// `beta` (polynomial family).
#[derive(Debug, Clone, Deserialize)]
pub struct WeightSel {
    #[serde(default)]
    pub weight: Option<WeightSpec>,
    #[serde(default)]
    pub beta: Option<f64>,
}

impl WeightSel {
    pub fn spec(&self) -> Result<Option<WeightSpec>, CliError> {
        Ok(match (&self.weight, self.beta) {
            (Some(w), _) => Some(w.clone()),
            (None, Some(beta)) => Some(WeightSpec::Polynomial { beta }),
            (None, None) => None,
        })
    }

    pub fn resolve(&self) -> Result<Weight, CliError> {
        match self.spec()? {
            Some(s) => Ok(make_weight(&s)?),
            None => Err(CliError::Config("missing 'weight' (or shorthand 'beta')".into())),
        }
    }
}

pub fn weight_label(spec: &WeightSpec) -> String {
    match spec {
        WeightSpec::Polynomial { beta } => format!("polynomial(beta={beta})"),
        WeightSpec::SubexpAlpha { alpha, c } => format!("subexp_alpha(alpha={alpha},C={c})"),
        WeightSpec::SubexpLog { gamma, c } => format!("subexp_log(gamma={gamma},C={c})"),
    }
}

/// `xi` from a list of real coefficients, defaulting to the first coordinate.
pub fn homomorphism(coeffs: Option<&[f64]>, dim: usize) -> Result<Homomorphism, CliError> {
    let h = match coeffs {
        Some(c) => {
            if c.len() != dim {
                return Err(CliError::Config(format!(
                    "xi has {} coefficients but dim is {dim}",
                    c.len()
                )));
            }
            Homomorphism::real(c)?
        }
        None => Homomorphism::coordinate(dim, 0)?,
    };
    if h.is_zero() {
        return Err(CliError::Config("xi must be nonzero".into()));
    }
    Ok(h)
}

pub fn check_dim(dim: usize) -> Result<(), CliError> {
    if dim == 0 || dim > 8 {
        return Err(CliError::Config(format!("dim must be in 1..=8, got {dim}")));
    }
    Ok(())
}

/// Refuses radii whose balls exceed the point budget.
pub fn check_ball_budget(dim: usize, radius: u64, budgets: &Budgets) -> Result<(), CliError> {
    let size = ball_size(dim, radius);
    if size > budgets.max_ball_points {
        return Err(CliError::Budget(format!(
            "ball of radius {radius} in dimension {dim} has {size} points, budget is {}",
            budgets.max_ball_points
        )));
    }
    Ok(())
}

pub fn json_list(v: &[&str]) -> Value {
    Value::from(v.iter().map(|s| Value::from(*s)).collect::<Vec<_>>())
}
