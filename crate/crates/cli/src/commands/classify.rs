use serde::Deserialize;

use orlicz_core::amenability::{classify, ClassificationResult};
use orlicz_core::WeightSpec;

use super::{metadata, weight_label, Outcome};
use crate::config::{OneOrMany, RunConfig};
use crate::error::CliError;
use crate::report::{Cell, ReportTable};

pub const COLUMNS: &[&str] = &[
    "p", "q", "dim", "weight", "verdict", "d_over_q", "half", "beta", "evidence",
];

#[derive(Debug, Deserialize)]
struct ClassifyConfig {
    p: OneOrMany<f64>,
    #[serde(default)]
    weight: Option<OneOrMany<WeightSpec>>,
    #[serde(default)]
    beta: Option<OneOrMany<f64>>,
    #[serde(default = "default_dim")]
    dim: OneOrMany<usize>,
}

fn default_dim() -> OneOrMany<usize> {
    OneOrMany::One(1)
}

/// Classifies every `(p, weight, dim)` of the grid, `p` outermost.
pub fn results(cfg: &RunConfig) -> Result<Vec<ClassificationResult>, CliError> {
    let c: ClassifyConfig = cfg.parse()?;
    if c.weight.is_none() && c.beta.is_none() {
        return Err(CliError::Config("classify needs 'weight' or 'beta'".into()));
    }
    let mut weights: Vec<WeightSpec> = c.weight.map(OneOrMany::into_vec).unwrap_or_default();
    weights.extend(
        c.beta
            .map(OneOrMany::into_vec)
            .unwrap_or_default()
            .into_iter()
            .map(|beta| WeightSpec::Polynomial { beta }),
    );
    let ps = c.p.into_vec();
    let dims = c.dim.into_vec();
    let mut out = Vec::with_capacity(ps.len() * weights.len() * dims.len());
    for &p in &ps {
        for w in &weights {
            for &d in &dims {
                out.push(classify(p, w, d)?);
            }
        }
    }
    Ok(out)
}

pub fn table(cfg: &RunConfig, results: &[ClassificationResult]) -> ReportTable {
    let mut t = ReportTable::new(COLUMNS, metadata(cfg));
    for r in results {
        t.push(vec![
            r.p.into(),
            r.q.into(),
            r.dim.into(),
            weight_label(&r.weight).into(),
            r.verdict.name().into(),
            r.thresholds.d_over_q.into(),
            r.thresholds.half.into(),
            r.thresholds.beta.into(),
            Cell::List(r.evidence.iter().map(|e| e.criterion.to_string()).collect()),
        ]);
    }
    t
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rs = results(cfg)?;
    Ok(Outcome::ok(table(cfg, &rs)))
}

/// One-line verdict followed by the full result as pretty JSON.
pub fn summary(r: &ClassificationResult) -> String {
    let mut s = format!(
        "p={} q={} dim={} weight={} verdict={}",
        r.p,
        r.q,
        r.dim,
        weight_label(&r.weight),
        r.verdict.name()
    );
    if let orlicz_core::amenability::Verdict::Undecided(why) = &r.verdict {
        s.push_str(&format!(" ({why})"));
    }
    s.push('\n');
    s.push_str(&serde_json::to_string_pretty(r).expect("result serialises"));
    s.push('\n');
    s
}
