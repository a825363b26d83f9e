use serde::Deserialize;

use orlicz_core::grid::log_grid;
use orlicz_core::young::conjugate;

use super::{metadata, Outcome, PairSel};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Cell, ReportTable};

pub const COLUMNS: &[&str] = &["y", "numeric", "closed_form", "abs_diff"];

#[derive(Debug, Deserialize)]
struct YGrid {
    lo: f64,
    hi: f64,
    n: usize,
}

#[derive(Debug, Deserialize)]
struct ConjugateConfig {
    #[serde(flatten)]
    pair: PairSel,
    #[serde(default)]
    y: Option<Vec<f64>>,
    #[serde(default)]
    y_grid: Option<YGrid>,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_ys() -> Vec<f64> {
    let mut ys = vec![0.0];
    ys.extend(log_grid(1e-2, 10.0, 40));
    ys
}

/// Numerical conjugate of `phi` against the pair's `psi` when `psi` is
/// closed-form. Rows whose relative gap exceeds `tolerance` fail.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c: ConjugateConfig = cfg.parse()?;
    let pair = c.pair.resolve()?;
    let ys = match (c.y, c.y_grid) {
        (Some(ys), _) => ys,
        (None, Some(g)) => {
            if !(g.lo > 0.0 && g.hi > g.lo && g.n >= 2) {
                return Err(CliError::Config("y_grid needs 0 < lo < hi and n >= 2".into()));
            }
            log_grid(g.lo, g.hi, g.n)
        }
        (None, None) => default_ys(),
    };
    if let Some(bad) = ys.iter().find(|y| !(**y >= 0.0) || !y.is_finite()) {
        return Err(CliError::Config(format!("y values must be finite and >= 0, got {bad}")));
    }
    let closed = (!pair.psi.is_numerical_conjugate()).then_some(&pair.psi);
    let mut t = ReportTable::new(COLUMNS, metadata(cfg));
    let mut worst: Option<(f64, f64)> = None;
    for &y in &ys {
        let numeric = conjugate(&pair.phi, y)?;
        let (closed_v, diff) = match closed {
            Some(psi) => {
                let v = psi.eval(y);
                let d = (numeric - v).abs();
                if d > c.tolerance * (1.0 + v.abs()) && worst.is_none_or(|(_, w)| d > w) {
                    worst = Some((y, d));
                }
                (Cell::Num(v), Cell::Num(d))
            }
            None => (Cell::Null, Cell::Null),
        };
        t.push(vec![y.into(), numeric.into(), closed_v, diff]);
    }
    Ok(Outcome {
        table: t,
        failure: worst.map(|(y, d)| {
            format!("conjugate of {} off by {d:e} at y={y}", pair.id())
        }),
    })
}
