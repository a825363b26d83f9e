use serde::Deserialize;

use orlicz_core::orlicz::{luxemburg_norm, modular, orlicz_norm, weighted_norm, NormKind};
use orlicz_core::FinSuppFn;

use super::{metadata, Outcome, PairSel, WeightSel};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Cell, ReportTable};

pub const COLUMNS: &[&str] = &[
    "pair",
    "support",
    "modular",
    "luxemburg",
    "orlicz",
    "weighted_luxemburg",
    "weighted_orlicz",
];

#[derive(Debug, Deserialize)]
struct NormConfig {
    #[serde(flatten)]
    pair: PairSel,
    #[serde(flatten)]
    weight: WeightSel,
    f: FinSuppFn,
}

/// Modular and both norms of `f`, plus the weighted norms when a weight is set.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c: NormConfig = cfg.parse()?;
    let pair = c.pair.resolve()?;
    let omega = c.weight.spec()?.map(|_| c.weight.resolve()).transpose()?;
    let lux = luxemburg_norm(&pair.phi, &c.f)?;
    let orl = orlicz_norm(&pair, &c.f)?;
    let (wl, wo) = match &omega {
        Some(w) => (
            Cell::Num(weighted_norm(&pair, w, &c.f, NormKind::Luxemburg)?),
            Cell::Num(weighted_norm(&pair, w, &c.f, NormKind::Orlicz)?),
        ),
        None => (Cell::Null, Cell::Null),
    };
    let mut t = ReportTable::new(COLUMNS, metadata(cfg));
    t.push(vec![
        pair.id().into(),
        c.f.len().into(),
        modular(&pair.phi, &c.f).into(),
        lux.into(),
        orl.into(),
        wl,
        wo,
    ]);
    Ok(Outcome::ok(t))
}
