//! Command-line driver: reads a JSON config, runs one experiment through
//! `orlicz-core` and emits a CSV or JSON report.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 config error, 3 budget
//! exceeded.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use error::CliError;
pub use report::{Format, ReportTable};

use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "orlicz", version, about = "Orlicz-space experiments on the integer lattice")]
pub struct Cli {
    /// Seed for every sampled experiment (overrides the config's `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// JSON config file, or `-` for stdin.
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak-amenability verdicts over a (p, weight, dim) grid.
    Classify {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        p: Option<f64>,
        /// Weight spec as JSON, e.g. '{"family":"polynomial","beta":0.4}'.
        #[arg(long)]
        weight: Option<String>,
        /// Shorthand for a polynomial weight.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Numerical conjugate against the closed form.
    Conjugate {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Modular, Luxemburg and Orlicz norms of one function.
    Norm {
        #[command(flatten)]
        cfg: ConfigArg,
    },
    /// Empirical scans of the weighted algebra inequalities.
    CertifyAlgebra {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        radius: Option<u64>,
    },
    /// Growth of the point-derivation ratio with the support radius.
    DerivationScan {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        window_radius: Option<u64>,
    },
    /// Invariant battery over the Young catalog.
    Verify {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Multiply every psi by this factor before checking.
        #[arg(long)]
        psi_scale: Option<f64>,
    },
}

/// Rendered report plus the invariant failure, if any.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub text: String,
    pub failure: Option<String>,
}

fn set_opt<T: Into<Value>>(cfg: &mut RunConfig, key: &str, v: Option<T>) {
    if let Some(v) = v {
        cfg.set(key, v.into());
    }
}

/// Sets a shorthand key and drops the long form it would otherwise lose to.
fn set_shorthand(cfg: &mut RunConfig, key: &str, shadows: &str, v: Option<f64>) {
    if let Some(v) = v {
        cfg.params.remove(shadows);
        cfg.set(key, v.into());
    }
}

fn build(name: &str, cfg: &ConfigArg, seed: Option<u64>) -> Result<RunConfig, CliError> {
    RunConfig::new(name, config::load(cfg.config.as_deref())?, seed)
}

/// Runs the parsed command and renders its report.
pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    let format = cli.format.unwrap_or(Format::Csv);
    let outcome = match &cli.command {
        Command::Classify {
            cfg,
            p,
            weight,
            beta,
            dim,
        } => {
            let mut rc = build("classify", cfg, cli.seed)?;
            set_opt(&mut rc, "p", *p);
            set_shorthand(&mut rc, "beta", "weight", *beta);
            set_opt(&mut rc, "dim", *dim);
            if let Some(w) = weight {
                if beta.is_none() {
                    rc.params.remove("beta");
                }
                let v: Value = serde_json::from_str(w)
                    .map_err(|e| CliError::Config(format!("--weight is not valid JSON: {e}")))?;
                rc.set("weight", v);
            }
            if p.is_some() && cli.format.is_none() {
                let rs = commands::classify::results(&rc)?;
                if let [single] = rs.as_slice() {
                    return Ok(Rendered {
                        text: commands::classify::summary(single),
                        failure: None,
                    });
                }
                commands::Outcome::ok(commands::classify::table(&rc, &rs))
            } else {
                commands::classify::run(&rc)?
            }
        }
        Command::Conjugate { cfg, family, p } => {
            let mut rc = build("conjugate", cfg, cli.seed)?;
            if family.is_some() || p.is_some() {
                let mut young = rc
                    .params
                    .get("young")
                    .cloned()
                    .unwrap_or_else(|| json!({"family": "power"}));
                if let Some(obj) = young.as_object_mut() {
                    if let Some(f) = family {
                        obj.insert("family".into(), Value::from(f.as_str()));
                    }
                    if let Some(p) = p {
                        obj.insert("p".into(), Value::from(*p));
                    }
                }
                rc.set("young", young);
            }
            commands::conjugate::run(&rc)?
        }
        Command::Norm { cfg } => commands::norm::run(&build("norm", cfg, cli.seed)?)?,
        Command::CertifyAlgebra { cfg, trials, radius } => {
            let mut rc = build("certify-algebra", cfg, cli.seed)?;
            set_opt(&mut rc, "trials", *trials);
            set_opt(&mut rc, "radius", *radius);
            commands::certify::run(&rc)?
        }
        Command::DerivationScan {
            cfg,
            trials,
            beta,
            p,
            window_radius,
        } => {
            let mut rc = build("derivation-scan", cfg, cli.seed)?;
            set_opt(&mut rc, "trials", *trials);
            set_shorthand(&mut rc, "beta", "weight", *beta);
            set_shorthand(&mut rc, "p", "young", *p);
            set_opt(&mut rc, "window_radius", *window_radius);
            commands::derivation::run(&rc)?
        }
        Command::Verify { cfg, psi_scale } => {
            let mut rc = build("verify", cfg, cli.seed)?;
            set_opt(&mut rc, "psi_scale", *psi_scale);
            commands::verify::run(&rc)?
        }
    };
    Ok(Rendered {
        text: outcome.table.render(format),
        failure: outcome.failure,
    })
}
