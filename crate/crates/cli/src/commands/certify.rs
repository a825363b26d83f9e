use serde::Deserialize;

use orlicz_core::algebra::{
    conv_inclusion_check, l1_module_check, pointwise_inclusion_check, submult_estimate,
    AlgebraContext, ScanPlan, ScanReport, CERTIFICATE,
};
use orlicz_core::Error as CoreError;

use super::{check_ball_budget, check_dim, metadata, Outcome, PairSel, WeightSel};
use crate::config::{Budgets, RunConfig};
use crate::error::CliError;
use crate::report::{Cell, ReportTable};

pub const COLUMNS: &[&str] = &[
    "check", "radius", "max_ratio", "samples", "trend", "growth", "certificate",
];

pub const CHECKS: &[&str] = &["submult", "l1_module", "conv_inclusion", "pointwise_inclusion"];

#[derive(Debug, Deserialize)]
struct CertifyConfig {
    #[serde(flatten)]
    pair: PairSel,
    #[serde(flatten)]
    weight: WeightSel,
    #[serde(default = "default_dim")]
    dim: usize,
    #[serde(default = "default_radius")]
    radius: u64,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default)]
    checks: Option<Vec<String>>,
    #[serde(default)]
    budgets: Budgets,
}

fn default_dim() -> usize {
    1
}

fn default_radius() -> u64 {
    64
}

fn default_trials() -> usize {
    200
}

fn push_report(t: &mut ReportTable, check: &str, r: &ScanReport) {
    for row in &r.per_radius {
        t.push(vec![
            check.into(),
            row.radius.into(),
            row.max_ratio.into(),
            row.samples.into(),
            r.trend.as_str().into(),
            r.growth.into(),
            r.certificate.into(),
        ]);
    }
}

/// Empirical scans of the algebra inequalities; inclusion checks for pairs
/// whose `psi(sqrt x)` is not a Young function are reported as
/// `not_applicable`.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c: CertifyConfig = cfg.parse()?;
    check_dim(c.dim)?;
    if c.trials == 0 {
        return Err(CliError::Config("trials must be positive".into()));
    }
    if c.radius == 0 {
        return Err(CliError::Config("radius must be positive".into()));
    }
    let checks: Vec<String> = c
        .checks
        .unwrap_or_else(|| CHECKS.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = checks.iter().find(|s| !CHECKS.contains(&s.as_str())) {
        return Err(CliError::Config(format!(
            "unknown check '{bad}', expected one of {}",
            CHECKS.join(", ")
        )));
    }
    let pair = c.pair.resolve()?;
    let omega = c.weight.resolve()?;
    check_ball_budget(c.dim, c.radius, &c.budgets)?;
    let mut plan = ScanPlan::new(c.trials, cfg.seed);
    plan.max_support = c.budgets.max_support;
    let ctx = AlgebraContext::new(pair.clone(), omega, c.dim)?;

    let mut t = ReportTable::new(COLUMNS, metadata(cfg));
    for check in &checks {
        let report = match check.as_str() {
            "submult" => submult_estimate(&ctx, c.radius, &plan),
            "l1_module" => l1_module_check(&ctx, c.radius, &plan),
            "conv_inclusion" => conv_inclusion_check(&pair, c.dim, c.radius, &plan),
            _ => pointwise_inclusion_check(&pair, c.dim, c.radius, &plan),
        };
        match report {
            Ok(r) => push_report(&mut t, check, &r),
            Err(CoreError::PreconditionFailure(_)) => t.push(vec![
                check.as_str().into(),
                Cell::Null,
                Cell::Null,
                Cell::Null,
                "not_applicable".into(),
                Cell::Null,
                CERTIFICATE.into(),
            ]),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome::ok(t))
}
