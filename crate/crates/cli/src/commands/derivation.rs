use serde::Deserialize;

use orlicz_core::algebra::{AlgebraContext, ScanPlan};
use orlicz_core::amenability::{derivation_norm_scan, DerivationOperator};

use super::{check_ball_budget, check_dim, homomorphism, metadata, Outcome, PairSel, WeightSel};
use crate::config::{Budgets, RunConfig};
use crate::error::CliError;
use crate::report::ReportTable;

pub const COLUMNS: &[&str] = &["radius", "max_ratio", "samples", "trend", "growth"];

#[derive(Debug, Deserialize)]
struct DerivationConfig {
    #[serde(flatten)]
    pair: PairSel,
    #[serde(flatten)]
    weight: WeightSel,
    #[serde(default = "default_dim")]
    dim: usize,
    #[serde(default = "default_radii")]
    radii: Vec<u64>,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_window")]
    window_radius: u64,
    #[serde(default)]
    xi: Option<Vec<f64>>,
    #[serde(default)]
    budgets: Budgets,
}

fn default_dim() -> usize {
    1
}

fn default_radii() -> Vec<u64> {
    vec![16, 64, 256]
}

fn default_trials() -> usize {
    200
}

fn default_window() -> u64 {
    1
}

/// Per-radius sup of `|<D f, g>| / (N(f w) N(g w))` and the trend verdict.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c: DerivationConfig = cfg.parse()?;
    check_dim(c.dim)?;
    if c.trials == 0 {
        return Err(CliError::Config("trials must be positive".into()));
    }
    if c.radii.is_empty() || c.radii.contains(&0) {
        return Err(CliError::Config("radii must be a nonempty list of positive integers".into()));
    }
    let pair = c.pair.resolve()?;
    let omega = c.weight.resolve()?;
    let xi = homomorphism(c.xi.as_deref(), c.dim)?;
    let r_max = *c.radii.iter().max().expect("radii is nonempty");
    check_ball_budget(c.dim, r_max, &c.budgets)?;
    check_ball_budget(c.dim, c.window_radius, &c.budgets)?;

    let mut plan = ScanPlan::new(c.trials, cfg.seed);
    plan.max_support = c.budgets.max_support;
    let ctx = AlgebraContext::new(pair, omega, c.dim)?;
    let d = DerivationOperator::new(xi, c.window_radius)?;
    let report = derivation_norm_scan(&ctx, &d, &c.radii, &plan)?;

    let mut t = ReportTable::new(COLUMNS, metadata(cfg));
    for row in &report.per_radius {
        t.push(vec![
            row.radius.into(),
            row.max_ratio.into(),
            row.samples.into(),
            report.trend.as_str().into(),
            report.growth.into(),
        ]);
    }
    Ok(Outcome::ok(t))
}
