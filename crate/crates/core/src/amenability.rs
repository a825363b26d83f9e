//! Homomorphisms `Z^d -> C`, the point derivation built from them, and the
//! weak-amenability classifier for weighted `l^p` algebras.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::{convolve, run_scan, AlgebraContext, ScanPlan, ScanReport};
use crate::error::{invalid, Error, Result};
use crate::finsupp::FinSuppFn;
use crate::lattice::{ball, shell_size_f64, Point, DEFAULT_BALL_BUDGET};
use crate::sampling::adversarial_pairs;
use crate::series::{classify_terms, tail_loglog_slope, SeriesVerdict};
use crate::weight::{make_weight, reciprocal_summability, Weight, WeightFamily, WeightSpec};
use crate::young::{sqrt_transform, YoungFunction};

/// Slope above which a log-log fit counts as growth.
pub const SLOPE_BAND: f64 = 0.05;
/// Relative increase of the running sup over the last decade that still
/// counts as stabilised.
pub const SUP_STABLE: f64 = 1e-3;
/// Shell count used for the series evidence inside [`classify`].
pub const CLASSIFY_N_MAX: u64 = 10_000;

/// `xi(x) = sum c_i x_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Homomorphism {
    coeffs: Vec<Complex64>,
}

impl Homomorphism {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a homomorphism needs at least one coefficient");
        }
        Ok(Self { coeffs })
    }

    pub fn real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `x -> x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return invalid(format!("coordinate {i} out of range for Z^{dim}"));
        }
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Self::real(&c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, x: &Point) -> Complex64 {
        debug_assert_eq!(x.dim(), self.dim());
        self.coeffs
            .iter()
            .zip(x.coords())
            .map(|(c, &k)| c * k as f64)
            .sum()
    }

    /// `max |xi(x)| / n` over `|x| = n`, attained at a corner of the box.
    pub fn corner_constant(&self) -> f64 {
        let d = self.dim();
        (0..1u64 << d)
            .map(|mask| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if mask >> i & 1 == 1 { -c } else { *c })
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `xi(s) / (w(s) w(-s))`.
#[derive(Debug, Clone)]
pub struct XiTilde {
    pub xi: Homomorphism,
    pub omega: Weight,
}

impl XiTilde {
    pub fn new(xi: Homomorphism, omega: Weight) -> Self {
        Self { xi, omega }
    }

    pub fn eval(&self, s: &Point) -> Complex64 {
        self.xi.eval(s) / (self.omega.eval(s) * self.omega.eval(&-s))
    }

    /// `max |xi~|` over the shell `|s| = n` (radial weights).
    pub fn shell_max(&self, n: u64) -> f64 {
        let w = self.omega.at_length(n as f64);
        self.xi.corner_constant() * n as f64 / (w * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XiBound {
    Bounded { sup_estimate: f64 },
    Unbounded { growth_exponent: f64 },
    Inconclusive,
}

impl XiBound {
    pub fn is_bounded(&self) -> bool {
        matches!(self, XiBound::Bounded { .. })
    }
}

/// Shell maxima indexed by `n` in `0..=n_max`.
fn shell_maxima(xt: &XiTilde, n_max: u64) -> Vec<f64> {
    (0..=n_max.max(1)).map(|n| xt.shell_max(n)).collect()
}

/// Whether `xi~` is bounded on `Z^d`.
///
/// Analytic mode uses `|xi~| ~ |s|^{1-2 beta}` for polynomial weights and
/// decay for the subexponential families; generic weights fall back to the
/// numeric mode, which fits the log-log slope of the shell maxima over the
/// last decade of `1..=n_max`.
pub fn xi_tilde_bounded(xt: &XiTilde, mode: BoundMode, n_max: u64) -> Result<XiBound> {
    if xt.xi.is_zero() {
        return invalid("xi must be nonzero");
    }
    if mode == BoundMode::Analytic {
        let kappa = xt.xi.corner_constant();
        match *xt.omega.family() {
            WeightFamily::Polynomial { beta } => {
                let e = 2.0 * beta - 1.0;
                if e < 0.0 {
                    return Ok(XiBound::Unbounded { growth_exponent: -e });
                }
                // n/(1+n)^{2 beta} peaks at n = 1/(2 beta - 1).
                let sup = if e == 0.0 {
                    kappa
                } else {
                    let peak = 1.0 / e;
                    [peak.floor().max(1.0), peak.ceil().max(1.0)]
                        .into_iter()
                        .map(|n| xt.shell_max(n as u64))
                        .fold(0.0, f64::max)
                };
                return Ok(XiBound::Bounded { sup_estimate: sup });
            }
            WeightFamily::SubexpAlpha { .. } | WeightFamily::SubexpLog { .. } => {
                let sup = shell_maxima(xt, n_max.min(100_000)).into_iter().fold(0.0, f64::max);
                return Ok(XiBound::Bounded { sup_estimate: sup });
            }
            WeightFamily::Generic(_) => {}
        }
    }
    let m = shell_maxima(xt, n_max);
    let sup = m.iter().copied().fold(0.0, f64::max);
    let slope = tail_loglog_slope(&m);
    match slope {
        Some(s) if s > SLOPE_BAND => return Ok(XiBound::Unbounded { growth_exponent: s }),
        Some(s) if s < -SLOPE_BAND => return Ok(XiBound::Bounded { sup_estimate: sup }),
        _ => {}
    }
    let cut = m.len() / 10;
    let earlier = m[..cut.max(1)].iter().copied().fold(0.0, f64::max);
    if sup <= earlier * (1.0 + SUP_STABLE) {
        Ok(XiBound::Bounded { sup_estimate: sup })
    } else {
        Ok(XiBound::Inconclusive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes { alpha: f64, estimate: f64 },
    No,
    Inconclusive,
}

/// Number of halvings tried when searching for a scale `alpha`.
const ALPHA_HALVINGS: i32 = 20;

/// Whether `sum_s psi~(alpha |xi~(s)|) < inf` for some `alpha > 0`.
///
/// Per shell the sum is squeezed between one corner term and
/// `|shell| * max term`; the upper series is tested for convergence and the
/// lower one for divergence over `alpha = 1, 1/2, ..., 2^-20`. Polynomial
/// weights against a pure power `c x^r` use the exact criterion
/// `r (2 beta - 1) > d`.
pub fn xi_tilde_in_lpsitilde(xt: &XiTilde, psi_tilde: &YoungFunction, n_max: u64) -> Result<Membership> {
    if xt.xi.is_zero() {
        return invalid("xi must be nonzero");
    }
    let dim = xt.xi.dim();
    let maxima = shell_maxima(xt, n_max);
    let upper = |alpha: f64| -> Vec<f64> {
        maxima
            .iter()
            .enumerate()
            .map(|(i, &m)| shell_size_f64(dim, i as u64) * psi_tilde.eval(alpha * m))
            .collect()
    };
    if let (WeightFamily::Polynomial { beta }, Some((_, r))) = (xt.omega.family(), psi_tilde.as_power()) {
        return Ok(if r * (2.0 * beta - 1.0) > dim as f64 {
            Membership::Yes {
                alpha: 1.0,
                estimate: upper(1.0).iter().sum(),
            }
        } else {
            Membership::No
        });
    }
    let mut all_lower_diverge = true;
    for k in 0..=ALPHA_HALVINGS {
        let alpha = 0.5f64.powi(k);
        if let SeriesVerdict::Converges { estimate } = classify_terms(&upper(alpha)) {
            return Ok(Membership::Yes { alpha, estimate });
        }
        let lower: Vec<f64> = maxima.iter().map(|&m| psi_tilde.eval(alpha * m)).collect();
        if classify_terms(&lower) != SeriesVerdict::Diverges {
            all_lower_diverge = false;
        }
    }
    Ok(if all_lower_diverge {
        Membership::No
    } else {
        Membership::Inconclusive
    })
}

/// `D(f) = 1_U * (f^ xi^)` with `U = ball(r)` and `h^(x) = h(-x)`.
#[derive(Debug, Clone)]
pub struct DerivationOperator {
    pub window: FinSuppFn,
    pub window_radius: u64,
    pub xi: Homomorphism,
}

impl DerivationOperator {
    pub fn new(xi: Homomorphism, window_radius: u64) -> Result<Self> {
        let dim = xi.dim();
        let pts = ball(dim, window_radius, DEFAULT_BALL_BUDGET)?;
        Ok(Self {
            window: FinSuppFn::indicator(dim, &pts),
            window_radius,
            xi,
        })
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }
}

pub fn apply_derivation(d: &DerivationOperator, f: &FinSuppFn) -> Result<FinSuppFn> {
    if f.dim() != d.dim() {
        return invalid(format!("f lives on Z^{}, derivation on Z^{}", f.dim(), d.dim()));
    }
    let fxi = FinSuppFn::from_entries(f.dim(), f.iter().map(|(s, v)| (s.clone(), v * d.xi.eval(s))))?;
    convolve(&d.window, &fxi.flip())
}

/// `<D(f), g>` with the bilinear pairing.
pub fn derivation_pairing(d: &DerivationOperator, f: &FinSuppFn, g: &FinSuppFn) -> Result<Complex64> {
    Ok(apply_derivation(d, f)?.pairing(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeibnizReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub ok: bool,
}

/// `<D(f*g), h> = <D(g), h*f> + <D(f), h*g>`.
pub fn leibniz_check(
    d: &DerivationOperator,
    f: &FinSuppFn,
    g: &FinSuppFn,
    h: &FinSuppFn,
) -> Result<LeibnizReport> {
    let lhs = derivation_pairing(d, &convolve(f, g)?, h)?;
    let rhs = derivation_pairing(d, g, &convolve(h, f)?)? + derivation_pairing(d, f, &convolve(h, g)?)?;
    Ok(LeibnizReport {
        lhs,
        rhs,
        ok: (lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()),
    })
}

/// Per radius, the max of `|<D f, g>| / (N(f w) N(g w))` over seeded
/// random pairs and the adversarial pool.
pub fn derivation_norm_scan(
    ctx: &AlgebraContext,
    d: &DerivationOperator,
    radii: &[u64],
    plan: &ScanPlan,
) -> Result<ScanReport> {
    if d.dim() != ctx.dim {
        return invalid("derivation and context dimensions differ");
    }
    if plan.trials == 0 {
        return invalid("trials must be positive");
    }
    let xi_abs = |p: &Point| d.xi.eval(p).norm();
    let pool = |r: u64| adversarial_pairs(ctx.dim, r, &ctx.omega, Some(&xi_abs));
    let ratio = |f: &FinSuppFn, g: &FinSuppFn| -> Result<Option<f64>> {
        let den = ctx.norm(f)? * ctx.norm(g)?;
        if !(den > 0.0) {
            return Ok(None);
        }
        Ok(Some(derivation_pairing(d, f, g)?.norm() / den))
    };
    let mut params = BTreeMap::new();
    params.insert("pair".into(), Value::from(ctx.pair.id()));
    params.insert("weight".into(), Value::from(format!("{:?}", ctx.omega.family())));
    params.insert("window_radius".into(), Value::from(d.window_radius));
    run_scan("derivation_norm_scan", ctx.dim, radii, plan, Some(&pool), &ratio, params)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellChainReport {
    pub monotone: bool,
    pub chain_holds: bool,
    pub first_chain_failure: Option<u64>,
    /// `sup_n kappa n a_n`, bounding `|xi| psi(alpha/w)` on shells.
    pub witness_sup: f64,
    pub partial_sum: f64,
    pub shell_sum: f64,
    pub ok: bool,
}

/// Checks, with `a_n = psi(alpha / w(n))`: `a_n` nonincreasing,
/// `n a_n <= a_1 + ... + a_n`, and that `sup_n |xi| a_n` on shells stays
/// below `kappa (a_1 + ... + a_N)`. Requires `sum_s psi(alpha/w(s))` to
/// converge.
pub fn shell_chain_diagnostic(
    omega: &Weight,
    psi: &YoungFunction,
    xi: &Homomorphism,
    alpha: f64,
    n_max: u64,
) -> Result<ShellChainReport> {
    if xi.is_zero() {
        return invalid("xi must be nonzero");
    }
    let dim = xi.dim();
    let verdict = reciprocal_summability(omega, psi, alpha, dim, n_max)?;
    let shell_sum = match verdict {
        SeriesVerdict::Converges { estimate } => estimate,
        other => {
            return Err(Error::PreconditionFailure(format!(
                "sum of psi(alpha/w) over Z^{dim} is not summable ({other:?})"
            )))
        }
    };
    let a: Vec<f64> = (1..=n_max.max(1))
        .map(|n| psi.eval(alpha / omega.at_length(n as f64)))
        .collect();
    let monotone = a.windows(2).all(|w| w[1] <= w[0]);
    let kappa = xi.corner_constant();
    let mut partial = 0.0;
    let mut first_failure = None;
    let mut witness = 0.0_f64;
    for (i, &an) in a.iter().enumerate() {
        let n = (i + 1) as f64;
        partial += an;
        // Rounding slack of the running sum.
        let slack = 4.0 * n * f64::EPSILON * partial;
        if first_failure.is_none() && n * an > partial + slack {
            first_failure = Some(i as u64 + 1);
        }
        witness = witness.max(kappa * n * an);
    }
    let chain_holds = first_failure.is_none();
    let witness_ok = witness.is_finite() && witness <= kappa * partial * (1.0 + 1e-12);
    Ok(ShellChainReport {
        monotone,
        chain_holds,
        first_chain_failure: first_failure,
        witness_sup: witness,
        partial_sum: partial,
        shell_sum,
        ok: monotone && chain_holds && witness_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Verdict {
    NotBanachAlgebra,
    WeaklyAmenable,
    NotWeaklyAmenable,
    Undecided(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NotBanachAlgebra => "NotBanachAlgebra",
            Verdict::WeaklyAmenable => "WeaklyAmenable",
            Verdict::NotWeaklyAmenable => "NotWeaklyAmenable",
            Verdict::Undecided(_) => "Undecided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub d_over_q: f64,
    pub half: f64,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub criterion: &'static str,
    pub detail: String,
}

fn evidence(criterion: &'static str, detail: impl Into<String>) -> Evidence {
    Evidence {
        criterion,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub p: f64,
    pub q: f64,
    pub dim: usize,
    pub weight: WeightSpec,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
    pub evidence: Vec<Evidence>,
}

/// Weak amenability of `l^p_w(Z^d)` for the built-in weight families.
pub fn classify(p: f64, spec: &WeightSpec, dim: usize) -> Result<ClassificationResult> {
    if !(p > 1.0) || !p.is_finite() {
        return invalid(format!("classify needs 1 < p < inf, got {p}"));
    }
    if dim == 0 {
        return invalid("lattice dimension must be positive");
    }
    let omega = make_weight(spec)?;
    let q = p / (p - 1.0);
    let d = dim as f64;
    let beta = match *spec {
        WeightSpec::Polynomial { beta } => Some(beta),
        _ => None,
    };
    let thresholds = Thresholds {
        d_over_q: d / q,
        half: 0.5,
        beta,
    };
    let mut ev = Vec::new();
    let psi = YoungFunction::power(q)?;
    let phi = YoungFunction::power(p)?;
    let xi = Homomorphism::coordinate(dim, 0)?;

    let verdict = if let Some(beta) = beta {
        let bq = beta * q;
        if bq <= d {
            ev.push(evidence(
                "reciprocal_weight_not_in_lq",
                format!("beta q = {bq} <= d = {dim}: sum (1+|s|)^(-beta q) diverges"),
            ));
            Verdict::NotBanachAlgebra
        } else {
            ev.push(evidence(
                "reciprocal_weight_in_lq",
                format!("beta q = {bq} > d = {dim}: weighted l^p is a convolution algebra"),
            ));
            if p <= 2.0 {
                let accepted = sqrt_transform(&psi)?.accepted().is_some();
                ev.push(evidence(
                    "sqrt_transform_of_psi",
                    format!("q = {q} >= 2: psi(sqrt x) is a Young function ({accepted})"),
                ));
                if beta < 0.5 {
                    ev.push(evidence(
                        "xi_tilde_unbounded_for_all_xi",
                        format!("|xi~(s)| ~ |s|^(1 - 2 beta) with 1 - 2 beta = {}", 1.0 - 2.0 * beta),
                    ));
                    Verdict::WeaklyAmenable
                } else {
                    ev.push(evidence(
                        "bounded_xi_tilde_derivation",
                        format!("2 beta = {} >= 1: xi~ bounded, D = 1_U * (f^ xi^) is bounded", 2.0 * beta),
                    ));
                    Verdict::NotWeaklyAmenable
                }
            } else {
                let accepted = sqrt_transform(&phi)?.accepted().is_some();
                ev.push(evidence(
                    "shell_chain_derivation",
                    format!("p = {p} > 2: phi(sqrt x) Young ({accepted}), 1/w in l^q, length-function weight"),
                ));
                if accepted {
                    Verdict::NotWeaklyAmenable
                } else {
                    Verdict::Undecided("phi(sqrt x) is not a Young function".into())
                }
            }
        }
    } else {
        ev.push(evidence(
            "subexponential_algebra",
            "subexponential weights give convolution algebras for every p > 1",
        ));
        let bound = xi_tilde_bounded(&XiTilde::new(xi.clone(), omega.clone()), BoundMode::Analytic, 1000)?;
        ev.push(evidence("xi_tilde_bounded", format!("{bound:?}")));
        if p <= 2.0 {
            ev.push(evidence(
                "bounded_xi_tilde_derivation",
                format!("q = {q} >= 2: psi(sqrt x) is a Young function"),
            ));
            Verdict::NotWeaklyAmenable
        } else {
            let summable = reciprocal_summability(&omega, &psi, 1.0, dim, CLASSIFY_N_MAX)?;
            ev.push(evidence("reciprocal_weight_in_lq", format!("{summable:?}")));
            if summable.converges() {
                ev.push(evidence(
                    "shell_chain_derivation",
                    format!("p = {p} > 2: phi(sqrt x) is a Young function and 1/w in l^q"),
                ));
                Verdict::NotWeaklyAmenable
            } else {
                Verdict::Undecided("summability of 1/w in l^q not confirmed".into())
            }
        }
    };
    Ok(ClassificationResult {
        p,
        q,
        dim,
        weight: spec.clone(),
        verdict,
        thresholds,
        evidence: ev,
    })
}
