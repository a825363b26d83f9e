//! Weights on `Z^d` built from the box word length.
//!
//! All built-in families have the form `w(x) = exp(nu(|x|))` with `nu`
//! nondecreasing, subadditive and `nu(0) = 0`, so `w(0) = 1`, `1/w <= 1` and
//! `w(s+t) <= w(s) w(t)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice::{ball, shell_size_f64, word_length, Point};
use crate::series::{classify_terms, SeriesVerdict};
use crate::young::YoungFunction;

/// Probe radius used when validating a weight.
const PROBE_RADIUS: u64 = 20;

/// JSON-facing weight description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightSpec {
    Polynomial {
        beta: f64,
    },
    SubexpAlpha {
        alpha: f64,
        #[serde(rename = "C")]
        c: f64,
    },
    SubexpLog {
        gamma: f64,
        #[serde(rename = "C")]
        c: f64,
    },
}

impl WeightSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            WeightSpec::Polynomial { .. } => "polynomial",
            WeightSpec::SubexpAlpha { .. } => "subexp_alpha",
            WeightSpec::SubexpLog { .. } => "subexp_log",
        }
    }
}

/// A user supplied exponent `nu` for `w = exp(nu(|x|))`.
#[derive(Clone)]
pub struct GenericNu {
    pub label: String,
    pub nu: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for GenericNu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenericNu({})", self.label)
    }
}

#[derive(Debug, Clone)]
pub enum WeightFamily {
    /// `(1 + |x|)^beta`
    Polynomial { beta: f64 },
    /// `exp(C |x|^alpha)`
    SubexpAlpha { alpha: f64, c: f64 },
    /// `exp(C |x| / ln(1+|x|)^gamma)`
    SubexpLog { gamma: f64, c: f64 },
    Generic(GenericNu),
}

#[derive(Debug, Clone)]
pub struct Weight {
    family: WeightFamily,
    submult_c: f64,
}

impl Weight {
    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// The submultiplicativity constant measured at construction.
    pub fn submult_c(&self) -> f64 {
        self.submult_c
    }

    /// The constant weight `1`.
    pub fn trivial() -> Self {
        Weight {
            family: WeightFamily::Polynomial { beta: 0.0 },
            submult_c: 1.0,
        }
    }

    /// `nu(n) = ln w` at word length `n`.
    pub fn nu(&self, n: f64) -> f64 {
        match &self.family {
            WeightFamily::Polynomial { beta } => beta * n.ln_1p(),
            WeightFamily::SubexpAlpha { alpha, c } => c * n.powf(*alpha),
            WeightFamily::SubexpLog { gamma, c } => {
                if n == 0.0 {
                    0.0
                } else {
                    c * n / n.ln_1p().powf(*gamma)
                }
            }
            WeightFamily::Generic(g) => (g.nu)(n),
        }
    }

    /// Weight value at word length `n`.
    pub fn at_length(&self, n: f64) -> f64 {
        match &self.family {
            WeightFamily::Polynomial { beta } => (1.0 + n).powf(*beta),
            _ => self.nu(n).exp(),
        }
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.at_length(word_length(x) as f64)
    }

    /// `w(s+t) / (w(s) w(t))`.
    pub fn omega_ratio(&self, s: &Point, t: &Point) -> f64 {
        self.eval(&(s + t)) / (self.eval(s) * self.eval(t))
    }
}

fn validate_nu(nu: &dyn Fn(f64) -> f64, label: &str) -> Result<()> {
    let at0 = nu(0.0);
    if at0.abs() > 1e-12 {
        return invalid(format!("weight {label}: nu(0) = {at0}, expected 0"));
    }
    let vals: Vec<f64> = (0..=2 * PROBE_RADIUS).map(|n| nu(n as f64)).collect();
    if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return invalid(format!("weight {label}: nu must be finite and nonnegative"));
    }
    if vals.windows(2).any(|w| w[1] < w[0]) {
        return invalid(format!("weight {label}: nu is not nondecreasing"));
    }
    for a in 0..=PROBE_RADIUS as usize {
        for b in 0..=PROBE_RADIUS as usize {
            if vals[a + b] > vals[a] + vals[b] + 1e-12 * (1.0 + vals[a + b]) {
                return invalid(format!(
                    "weight {label}: nu fails subadditivity at ({a}, {b})"
                ));
            }
        }
    }
    let far = nu(1e6);
    if !(far > vals[vals.len() - 1]) {
        return invalid(format!("weight {label}: nu does not grow"));
    }
    Ok(())
}

/// Largest `Omega(s,t)` over pairs of word lengths `a, b <= radius`.
///
/// The built-in weights are radial for the box length, so pairs in
/// `ball(radius)^2` only matter through `(|s|, |t|, |s+t|)`; for `d >= 2`
/// every triple obeying the triangle inequality occurs.
fn radial_submult(w: &Weight, radius: u64) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..=radius {
        for b in 0..=radius {
            let (wa, wb) = (w.at_length(a as f64), w.at_length(b as f64));
            for c in a.abs_diff(b)..=a + b {
                worst = worst.max(w.at_length(c as f64) / (wa * wb));
            }
        }
    }
    worst
}

fn finish(family: WeightFamily) -> Result<Weight> {
    let mut w = Weight {
        family,
        submult_c: 1.0,
    };
    let c = radial_submult(&w, PROBE_RADIUS);
    if !c.is_finite() {
        return Err(Error::InvalidInput("weight is not submultiplicative".into()));
    }
    w.submult_c = c.max(1.0);
    Ok(w)
}

/// Builds and validates a weight from its JSON-facing description.
pub fn make_weight(spec: &WeightSpec) -> Result<Weight> {
    let family = match *spec {
        WeightSpec::Polynomial { beta } => {
            if !(beta >= 0.0 && beta.is_finite()) {
                return invalid(format!("polynomial weight needs beta >= 0, got {beta}"));
            }
            WeightFamily::Polynomial { beta }
        }
        WeightSpec::SubexpAlpha { alpha, c } => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return invalid(format!("subexp_alpha needs 0 < alpha <= 1, got {alpha}"));
            }
            if !(c > 0.0 && c.is_finite()) {
                return invalid(format!("subexp_alpha needs C > 0, got {c}"));
            }
            WeightFamily::SubexpAlpha { alpha, c }
        }
        WeightSpec::SubexpLog { gamma, c } => {
            if !(gamma > 0.0 && gamma.is_finite()) {
                return invalid(format!("subexp_log needs gamma > 0, got {gamma}"));
            }
            if !(c > 0.0 && c.is_finite()) {
                return invalid(format!("subexp_log needs C > 0, got {c}"));
            }
            WeightFamily::SubexpLog { gamma, c }
        }
    };
    finish(family)
}

/// `exp(nu(|x|))` for a user supplied `nu`, after probing its hypotheses.
pub fn make_generic_weight(
    label: impl Into<String>,
    nu: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Result<Weight> {
    let label = label.into();
    validate_nu(&nu, &label)?;
    finish(WeightFamily::Generic(GenericNu {
        label,
        nu: Arc::new(nu),
    }))
}

/// Exhaustive max of `Omega(s,t)` over `ball(n)^2` in dimension `dim`.
pub fn submult_constant(omega: &Weight, dim: usize, n: u64, budget: u128) -> Result<f64> {
    let pts = ball(dim, n, budget)?;
    let pairs = (pts.len() as u128).saturating_mul(pts.len() as u128);
    if pairs > budget.saturating_mul(64) {
        return Err(Error::ResourceLimit {
            what: "submultiplicativity pairs",
            needed: pairs,
            budget: budget.saturating_mul(64),
        });
    }
    let vals: Vec<f64> = pts.iter().map(|p| omega.eval(p)).collect();
    let mut worst = 0.0_f64;
    for (s, ws) in pts.iter().zip(&vals) {
        for (t, wt) in pts.iter().zip(&vals) {
            worst = worst.max(omega.eval(&(s + t)) / (ws * wt));
        }
    }
    Ok(worst)
}

/// `Omega(s,t) <= u(s) + v(t)` for all `(s,t)` in `ball(n)^2`.
pub fn uv_decomposition_check(
    omega: &Weight,
    u: &dyn Fn(&Point) -> f64,
    v: &dyn Fn(&Point) -> f64,
    dim: usize,
    n: u64,
    budget: u128,
) -> Result<bool> {
    let pts = ball(dim, n, budget)?;
    let us: Vec<f64> = pts.iter().map(u).collect();
    let vs: Vec<f64> = pts.iter().map(v).collect();
    if us.iter().chain(&vs).any(|x| *x < 0.0) {
        return invalid("u and v must be nonnegative");
    }
    for (s, us) in pts.iter().zip(&us) {
        for (t, vt) in pts.iter().zip(&vs) {
            if omega.omega_ratio(s, t) > us + vt {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verdict for `sum_{s in Z^d} psi(alpha / w(s))`.
///
/// Polynomial weights against a pure power `psi = c x^r` use the exact
/// criterion `beta r > d`; everything else goes through the shell-term
/// heuristics of [`classify_terms`].
pub fn reciprocal_summability(
    omega: &Weight,
    psi: &YoungFunction,
    alpha: f64,
    dim: usize,
    n_max: u64,
) -> Result<SeriesVerdict> {
    if !(alpha > 0.0) {
        return invalid("alpha must be positive");
    }
    let terms: Vec<f64> = (0..=n_max)
        .map(|n| shell_size_f64(dim, n) * psi.eval(alpha / omega.at_length(n as f64)))
        .collect();
    let partial: f64 = terms.iter().sum();
    if let (WeightFamily::Polynomial { beta }, Some((_, r))) = (&omega.family, psi.as_power()) {
        return Ok(if beta * r > dim as f64 {
            SeriesVerdict::Converges { estimate: partial }
        } else {
            SeriesVerdict::Diverges
        });
    }
    Ok(classify_terms(&terms))
}
