//! Sparse convolution on `Z^d` and empirical boundedness scans for weighted
//! Orlicz algebras.
//!
//! Scan results are lower bounds for operator norms: a growing trend is
//! evidence against boundedness, a plateau is consistency evidence only.
//! Reports therefore carry `certificate: "empirical"`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finsupp::FinSuppFn;
use crate::grid::log_grid;
use crate::orlicz::{luxemburg_norm, weighted_l1, weighted_luxemburg};
use crate::sampling::{adversarial_pairs, cell_rng, random_fn, tag_of, DEFAULT_MAX_SUPPORT};
use crate::weight::Weight;
use crate::young::{sqrt_transform, ComplementaryPair, GridCheck, SqrtOutcome, YoungFunction};

/// Default cap on `|supp f| * |supp g|` for one convolution.
pub const DEFAULT_CONV_BUDGET: u128 = 50_000_000;
pub const PLATEAU_GROWTH: f64 = 0.15;
pub const GROWTH_THRESHOLD: f64 = 0.25;
pub const CERTIFICATE: &str = "empirical";

/// `(f * g)(x) = sum_y f(y) g(x - y)`.
pub fn convolve(f: &FinSuppFn, g: &FinSuppFn) -> Result<FinSuppFn> {
    convolve_with_budget(f, g, DEFAULT_CONV_BUDGET)
}

pub fn convolve_with_budget(f: &FinSuppFn, g: &FinSuppFn, budget: u128) -> Result<FinSuppFn> {
    if f.dim() != g.dim() {
        return Err(Error::InvalidInput(format!(
            "cannot convolve functions on Z^{} and Z^{}",
            f.dim(),
            g.dim()
        )));
    }
    let needed = f.len() as u128 * g.len() as u128;
    if needed > budget {
        return Err(Error::ResourceLimit {
            what: "convolution products",
            needed,
            budget,
        });
    }
    let mut out = FinSuppFn::zero(f.dim());
    for (s, a) in f.iter() {
        for (t, b) in g.iter() {
            out.add_at(s + t, a * b);
        }
    }
    Ok(out)
}

/// `x -> f(-x)`.
pub fn check_flip(f: &FinSuppFn) -> FinSuppFn {
    f.flip()
}

/// The triple `(pair, weight, Z^dim)`.
#[derive(Debug, Clone)]
pub struct AlgebraContext {
    pub pair: ComplementaryPair,
    pub omega: Weight,
    pub dim: usize,
}

impl AlgebraContext {
    pub fn new(pair: ComplementaryPair, omega: Weight, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("lattice dimension must be positive".into()));
        }
        Ok(Self { pair, omega, dim })
    }

    /// `N_phi(f w)`.
    pub fn norm(&self, f: &FinSuppFn) -> Result<f64> {
        weighted_luxemburg(&self.pair.phi, &self.omega, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Plateau,
    Growth,
    Indeterminate,
}

impl Trend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Plateau => "plateau",
            Trend::Growth => "growth",
            Trend::Indeterminate => "indeterminate",
        }
    }
}

/// Relative growth `last / first - 1` of a per-radius series.
pub fn relative_growth(values: &[f64]) -> f64 {
    match (values.first(), values.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => b / a - 1.0,
        _ => 0.0,
    }
}

pub fn classify_trend(values: &[f64]) -> Trend {
    let g = relative_growth(values);
    if g < PLATEAU_GROWTH {
        Trend::Plateau
    } else if g >= GROWTH_THRESHOLD {
        Trend::Growth
    } else {
        Trend::Indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRow {
    pub radius: u64,
    pub max_ratio: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub op: String,
    pub params: BTreeMap<String, Value>,
    pub max_ratio: f64,
    pub per_radius: Vec<RadiusRow>,
    pub trend: Trend,
    pub growth: f64,
    pub certificate: &'static str,
}

/// Sampling plan shared by all scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPlan {
    pub trials: usize,
    pub seed: u64,
    pub max_support: usize,
    pub adversarial: bool,
}

impl ScanPlan {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            max_support: DEFAULT_MAX_SUPPORT,
            adversarial: true,
        }
    }

    pub fn random_only(mut self) -> Self {
        self.adversarial = false;
        self
    }
}

/// `{R/4, R/2, R}` with duplicates and zeros removed.
pub fn trend_radii(radius: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [radius / 4, radius / 2, radius]
        .into_iter()
        .filter(|&r| r > 0)
        .collect();
    out.dedup();
    if out.is_empty() {
        out.push(radius);
    }
    out
}

type PairPool<'a> = dyn Fn(u64) -> Vec<(FinSuppFn, FinSuppFn)> + Sync + 'a;
type RatioFn<'a> = dyn Fn(&FinSuppFn, &FinSuppFn) -> Result<Option<f64>> + Sync + 'a;

/// Max of `ratio(f, g)` per radius over seeded random pairs plus an
/// optional deterministic pool. `None` ratios (zero denominators) are skipped.
pub(crate) fn run_scan(
    op: &str,
    dim: usize,
    radii: &[u64],
    plan: &ScanPlan,
    pool: Option<&PairPool<'_>>,
    ratio: &RatioFn<'_>,
    params: BTreeMap<String, Value>,
) -> Result<ScanReport> {
    if radii.is_empty() {
        return Err(Error::InvalidInput(format!("{op}: empty radius list")));
    }
    let tag = tag_of(op);
    let mut per_radius = Vec::with_capacity(radii.len());
    for &radius in radii {
        let random: Vec<Option<f64>> = (0..plan.trials as u64)
            .into_par_iter()
            .map(|trial| {
                let mut rng = cell_rng(plan.seed, tag, radius, trial);
                let f = random_fn(&mut rng, dim, radius, plan.max_support);
                let g = random_fn(&mut rng, dim, radius, plan.max_support);
                ratio(&f, &g)
            })
            .collect::<Result<_>>()?;
        let extra: Vec<Option<f64>> = match (plan.adversarial, pool) {
            (true, Some(pool)) => pool(radius)
                .par_iter()
                .map(|(f, g)| ratio(f, g))
                .collect::<Result<_>>()?,
            _ => Vec::new(),
        };
        let vals: Vec<f64> = random.into_iter().chain(extra).flatten().collect();
        let max_ratio = vals.iter().copied().fold(0.0, f64::max);
        per_radius.push(RadiusRow {
            radius,
            max_ratio,
            samples: vals.len(),
        });
    }
    let series: Vec<f64> = per_radius.iter().map(|r| r.max_ratio).collect();
    let mut params = params;
    params.insert("trials".into(), Value::from(plan.trials));
    params.insert("seed".into(), Value::from(plan.seed));
    params.insert("dim".into(), Value::from(dim));
    Ok(ScanReport {
        op: op.to_string(),
        params,
        max_ratio: series.iter().copied().fold(0.0, f64::max),
        trend: classify_trend(&series),
        growth: relative_growth(&series),
        per_radius,
        certificate: CERTIFICATE,
    })
}

fn ratio_of(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

fn ctx_params(ctx: &AlgebraContext) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("pair".into(), Value::from(ctx.pair.id()));
    m.insert("weight".into(), Value::from(format!("{:?}", ctx.omega.family())));
    m
}

/// `N(f*g w) / (N(f w) N(g w))` over seeded pairs in `ball(R)` for
/// `R in {radius/4, radius/2, radius}`.
pub fn submult_estimate(ctx: &AlgebraContext, radius: u64, plan: &ScanPlan) -> Result<ScanReport> {
    let pool = |r: u64| adversarial_pairs(ctx.dim, r, &ctx.omega, None);
    let ratio = |f: &FinSuppFn, g: &FinSuppFn| -> Result<Option<f64>> {
        let den = ctx.norm(f)? * ctx.norm(g)?;
        Ok(ratio_of(ctx.norm(&convolve(f, g)?)?, den))
    };
    run_scan(
        "submult_estimate",
        ctx.dim,
        &trend_radii(radius),
        plan,
        Some(&pool),
        &ratio,
        ctx_params(ctx),
    )
}

/// `N(f*g w) / (||f w||_1 N(g w))`.
pub fn l1_module_check(ctx: &AlgebraContext, radius: u64, plan: &ScanPlan) -> Result<ScanReport> {
    let pool = |r: u64| adversarial_pairs(ctx.dim, r, &ctx.omega, None);
    let ratio = |f: &FinSuppFn, g: &FinSuppFn| -> Result<Option<f64>> {
        let den = weighted_l1(&ctx.omega, f) * ctx.norm(g)?;
        Ok(ratio_of(ctx.norm(&convolve(f, g)?)?, den))
    };
    run_scan(
        "l1_module_check",
        ctx.dim,
        &trend_radii(radius),
        plan,
        Some(&pool),
        &ratio,
        ctx_params(ctx),
    )
}

/// `psi(sqrt x)` and its conjugate, or a precondition failure.
pub fn sqrt_pair(pair: &ComplementaryPair) -> Result<(YoungFunction, YoungFunction)> {
    match sqrt_transform(&pair.psi)? {
        SqrtOutcome::Accepted(psi_t) => {
            let (phi_t, _) = psi_t.conjugate_function();
            Ok((psi_t, phi_t))
        }
        SqrtOutcome::Rejected { at, reason } => Err(Error::PreconditionFailure(format!(
            "{}: psi(sqrt x) is not a Young function ({reason}, x = {at:e})",
            pair.id()
        ))),
    }
}

/// Grid used by [`sqrt_conjugate_inequality_check`] when none is given.
pub fn sqrt_conjugate_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 61)
}

/// With `psi~ = psi(sqrt .)` and `phi~` its conjugate, checks
/// `phi(x) <= phi~(2x^2/phi(x))` and `phi~(x^2/(4 phi(x))) <= phi(x)`
/// at every grid point, to relative tolerance `1e-6`.
pub fn sqrt_conjugate_inequality_check(pair: &ComplementaryPair, grid: &[f64]) -> Result<GridCheck> {
    let (_, phi_t) = sqrt_pair(pair)?;
    let mut check = GridCheck::default();
    for &x in grid {
        let p = pair.phi.eval(x);
        if !(p > 0.0) || !p.is_finite() {
            continue;
        }
        let upper = phi_t.eval(2.0 * x * x / p);
        check.record(p, upper, 1e-6 * p, &[x]);
        let lower = phi_t.eval(x * x / (4.0 * p));
        check.record(lower, p, 1e-6 * p, &[x]);
    }
    Ok(check)
}

fn pair_params(pair: &ComplementaryPair) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("pair".into(), Value::from(pair.id()));
    m
}

/// `N_psi(u*f) / (N_psi~(u) N_phi(f))`.
pub fn conv_inclusion_check(
    pair: &ComplementaryPair,
    dim: usize,
    radius: u64,
    plan: &ScanPlan,
) -> Result<ScanReport> {
    let (psi_t, _) = sqrt_pair(pair)?;
    let ratio = |u: &FinSuppFn, f: &FinSuppFn| -> Result<Option<f64>> {
        let den = luxemburg_norm(&psi_t, u)? * luxemburg_norm(&pair.phi, f)?;
        Ok(ratio_of(luxemburg_norm(&pair.psi, &convolve(u, f)?)?, den))
    };
    run_scan(
        "conv_inclusion_check",
        dim,
        &trend_radii(radius),
        plan,
        None,
        &ratio,
        pair_params(pair),
    )
}

/// `N_phi(f g) / (N_phi~(f) N_psi(g))`.
pub fn pointwise_inclusion_check(
    pair: &ComplementaryPair,
    dim: usize,
    radius: u64,
    plan: &ScanPlan,
) -> Result<ScanReport> {
    let (_, phi_t) = sqrt_pair(pair)?;
    let ratio = |f: &FinSuppFn, g: &FinSuppFn| -> Result<Option<f64>> {
        let den = luxemburg_norm(&phi_t, f)? * luxemburg_norm(&pair.psi, g)?;
        Ok(ratio_of(luxemburg_norm(&pair.phi, &f.times(g))?, den))
    };
    run_scan(
        "pointwise_inclusion_check",
        dim,
        &trend_radii(radius),
        plan,
        None,
        &ratio,
        pair_params(pair),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Point;
    use crate::orlicz::single_atom_luxemburg;
    use crate::weight::{make_weight, WeightSpec};
    use crate::young::{lookup, YoungSpec};
    use num_complex::Complex64;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn power_pair(p: f64) -> ComplementaryPair {
        lookup(&YoungSpec::new("power", Some(p))).unwrap()
    }

    #[test]
    fn atoms_convolve_to_atoms() {
        let a = FinSuppFn::delta(Point(vec![2, -1]), one());
        let b = FinSuppFn::delta(Point(vec![-5, 4]), one());
        assert_eq!(convolve(&a, &b).unwrap(), FinSuppFn::delta(Point(vec![-3, 3]), one()));
    }

    #[test]
    fn small_indicator_convolution() {
        let pts: Vec<Point> = (-1..=1).map(|k| Point(vec![k])).collect();
        let u = FinSuppFn::indicator(1, &pts);
        let uu = convolve(&u, &u).unwrap();
        assert_eq!(uu.get(&Point(vec![0])), Complex64::new(3.0, 0.0));
        assert_eq!(uu.get(&Point(vec![2])), one());
        assert_eq!(uu.len(), 5);
    }

    #[test]
    fn budget_is_enforced() {
        let pts: Vec<Point> = (0..100).map(|k| Point(vec![k])).collect();
        let u = FinSuppFn::indicator(1, &pts);
        assert!(matches!(
            convolve_with_budget(&u, &u, 9_999),
            Err(Error::ResourceLimit { needed: 10_000, .. })
        ));
        let v = FinSuppFn::zero(2);
        assert!(matches!(convolve(&u, &v), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn trend_thresholds() {
        assert_eq!(classify_trend(&[1.0, 1.1, 1.14]), Trend::Plateau);
        assert_eq!(classify_trend(&[1.0, 2.0, 1.25]), Trend::Growth);
        assert_eq!(classify_trend(&[1.0, 1.2]), Trend::Indeterminate);
        assert_eq!(classify_trend(&[2.0, 1.0]), Trend::Plateau);
        assert_eq!(trend_radii(64), vec![16, 32, 64]);
        assert_eq!(trend_radii(1), vec![1]);
    }

    #[test]
    fn identity_gives_unit_ratio() {
        let ctx = AlgebraContext::new(
            power_pair(1.5),
            make_weight(&WeightSpec::Polynomial { beta: 0.7 }).unwrap(),
            1,
        )
        .unwrap();
        let d0 = FinSuppFn::delta(Point(vec![0]), one());
        let f = FinSuppFn::from_entries(
            1,
            [(Point(vec![3]), Complex64::new(0.5, -2.0)), (Point(vec![-7]), one())],
        )
        .unwrap();
        let fd = convolve(&f, &d0).unwrap();
        assert_eq!(fd, f);
        // N(delta_0) = 1 / phi^{-1}(1).
        let r = ctx.norm(&fd).unwrap() / (ctx.norm(&f).unwrap() * ctx.norm(&d0).unwrap());
        let inv1 = 1.0 / single_atom_luxemburg(&ctx.pair.phi, 1.0).unwrap();
        assert!((r - inv1).abs() < 1e-12 * inv1);
    }

    #[test]
    fn sqrt_conjugate_inequality_on_power_and_entropy() {
        let grid = sqrt_conjugate_grid();
        assert!(sqrt_conjugate_inequality_check(&power_pair(1.5), &grid).unwrap().ok);
        assert!(sqrt_conjugate_inequality_check(&power_pair(2.0), &grid).unwrap().ok);
        let ent = lookup(&YoungSpec::new("entropy", None)).unwrap();
        match sqrt_conjugate_inequality_check(&ent, &grid) {
            Ok(c) => assert!(c.ok, "{c:?}"),
            Err(Error::PreconditionFailure(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn sqrt_precondition_is_enforced() {
        // psi = x^{1.5}/1.5: psi'(x)/x = x^{-1/2} decreases.
        let pair = power_pair(3.0);
        assert!(matches!(
            sqrt_conjugate_inequality_check(&pair, &[1.0]),
            Err(Error::PreconditionFailure(_))
        ));
    }

    #[test]
    fn single_atom_inclusion_ratios() {
        let pair = power_pair(1.5);
        let (psi_t, phi_t) = sqrt_pair(&pair).unwrap();
        let d0 = FinSuppFn::delta(Point(vec![0]), one());
        let conv = luxemburg_norm(&pair.psi, &d0).unwrap()
            / (luxemburg_norm(&psi_t, &d0).unwrap() * luxemburg_norm(&pair.phi, &d0).unwrap());
        let closed = |f: &YoungFunction| single_atom_luxemburg(f, 1.0).unwrap();
        let expected = closed(&pair.psi) / (closed(&psi_t) * closed(&pair.phi));
        assert!((conv - expected).abs() < 1e-12 * expected);
        let point = luxemburg_norm(&pair.phi, &d0).unwrap()
            / (luxemburg_norm(&phi_t, &d0).unwrap() * luxemburg_norm(&pair.psi, &d0).unwrap());
        assert!(point.is_finite() && point > 0.0);
    }

    #[test]
    fn scans_are_deterministic() {
        let ctx = AlgebraContext::new(power_pair(2.0), Weight::trivial(), 1).unwrap();
        let plan = ScanPlan::new(20, 11);
        let a = submult_estimate(&ctx, 8, &plan).unwrap();
        let b = submult_estimate(&ctx, 8, &plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.certificate, "empirical");
        assert_eq!(a.per_radius.len(), 3);
    }
}
