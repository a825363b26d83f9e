//! Young functions and complementary pairs.
//!
//! A [`YoungFunction`] is a convex, continuous, strictly increasing map
//! `[0, inf) -> [0, inf)` vanishing at zero. Closed forms are kept
//! symbolic (an enum of shapes) so that conjugates, square-root transforms
//! and rescalings of catalog members stay exact; everything else goes
//! through the numerical conjugate and bisection routines below.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{log_grid, working_grid};
use crate::quad::{bisect_increasing, integrate};

/// Shared scalar evaluator.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Bracket expansion stops here and the conjugate is declared infinite.
pub const CONJUGATE_X_CAP: f64 = 1e12;
const TINY_X: f64 = 1e-300;
const TERNARY_ITERS: usize = 200;
const BISECT_ITERS: usize = 2000;

/// A density `varphi` generating a pair through `Phi = int varphi`.
pub struct Density {
    label: String,
    varphi: ScalarFn,
}

impl Density {
    fn eval(&self, x: f64) -> f64 {
        (self.varphi)(x)
    }

    fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.eval(hi) < y {
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        let mut lo = hi * 0.5;
        while self.eval(lo) >= y && lo > TINY_X {
            lo *= 0.5;
        }
        let (lo, hi) = bisect_increasing(|x| self.eval(x), y, lo, hi, BISECT_ITERS);
        0.5 * (lo + hi)
    }
}

#[derive(Clone)]
enum Shape {
    /// `coef * x^exp`, `exp >= 1`.
    Power { coef: f64, exp: f64 },
    /// Conjugate of `slope * x`: zero on `[0, slope]`, infinite beyond.
    LinearDual { slope: f64 },
    CoshMinusOne,
    /// `(1+x) ln(1+x) - x`
    Entropy,
    /// `e^x - x - 1`
    ExpMinusLinear,
    /// `[x^2 ln(1+x)]^p`
    X2LogPow { p: f64 },
    /// `(e^x - x - 1)^p`
    ExpMinusLinearPow { p: f64 },
    /// `e^{x^p} - 1`
    ExpPowMinusOne { p: f64 },
    /// `(cosh x - 1)^p`
    CoshPow { p: f64 },
    Conjugate(Box<YoungFunction>),
    /// `inner(sqrt x)`
    SqrtArg(Box<YoungFunction>),
    /// `value * inner(arg * x)`
    Rescaled {
        inner: Box<YoungFunction>,
        arg: f64,
        value: f64,
    },
    /// `int_0^x varphi` or, with `inverse`, `int_0^x varphi^{-1}`.
    DensityIntegral { density: Arc<Density>, inverse: bool },
    Custom {
        eval: ScalarFn,
        derivative: Option<ScalarFn>,
    },
}

/// A finite-valued Young function with catalog metadata.
#[derive(Clone)]
pub struct YoungFunction {
    shape: Shape,
    label: String,
    params: Vec<(String, f64)>,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction")
            .field("label", &self.label)
            .field("params", &self.params)
            .finish()
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        for (k, v) in &self.params {
            write!(f, "[{k}={v}]")?;
        }
        Ok(())
    }
}

fn series_entropy(x: f64) -> f64 {
    // sum_{n>=2} (-1)^n x^n / (n(n-1))
    let mut term = x * x;
    let mut acc = 0.0;
    for n in 2..16 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * term / (n * (n - 1)) as f64;
        term *= x;
    }
    acc
}

fn exp_minus_linear(x: f64) -> f64 {
    if x < 1e-2 {
        let mut term = x * x / 2.0;
        let mut acc = 0.0;
        for n in 3..16 {
            acc += term;
            term *= x / n as f64;
        }
        acc
    } else {
        x.exp_m1() - x
    }
}

fn cosh_minus_one(x: f64) -> f64 {
    let s = (0.5 * x).sinh();
    2.0 * s * s
}

impl YoungFunction {
    fn new(shape: Shape, label: impl Into<String>, params: Vec<(String, f64)>) -> Self {
        Self {
            shape,
            label: label.into(),
            params,
        }
    }

    /// `x^p / p` for `p > 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return invalid(format!("power exponent must satisfy p > 1, got {p}"));
        }
        Ok(Self::new(
            Shape::Power {
                coef: 1.0 / p,
                exp: p,
            },
            "power",
            vec![("p".into(), p)],
        ))
    }

    /// `coef * x^exp` for `exp >= 1`, `coef > 0`.
    pub fn scaled_power(coef: f64, exp: f64) -> Result<Self> {
        if !(coef > 0.0 && coef.is_finite() && exp >= 1.0 && exp.is_finite()) {
            return invalid(format!("scaled power needs coef > 0, exp >= 1 (got {coef}, {exp})"));
        }
        Ok(Self::new(
            Shape::Power { coef, exp },
            "scaled_power",
            vec![("coef".into(), coef), ("exp".into(), exp)],
        ))
    }

    pub fn cosh_minus_one() -> Self {
        Self::new(Shape::CoshMinusOne, "cosh", Vec::new())
    }

    /// `(1+x) ln(1+x) - x`.
    pub fn entropy() -> Self {
        Self::new(Shape::Entropy, "entropy", Vec::new())
    }

    /// `e^x - x - 1`.
    pub fn exp_minus_linear() -> Self {
        Self::new(Shape::ExpMinusLinear, "exp_linear", vec![("p".into(), 1.0)])
    }

    fn check_family_p(p: f64, family: &str) -> Result<()> {
        if !(p >= 1.0 && p.is_finite()) {
            return invalid(format!("{family}: exponent p must be >= 1, got {p}"));
        }
        Ok(())
    }

    /// `[x^2 ln(1+x)]^p`, `p >= 1`.
    pub fn x2log_pow(p: f64) -> Result<Self> {
        Self::check_family_p(p, "x2log")?;
        Ok(Self::new(Shape::X2LogPow { p }, "x2log", vec![("p".into(), p)]))
    }

    /// `(e^x - x - 1)^p`, `p >= 1`.
    pub fn exp_minus_linear_pow(p: f64) -> Result<Self> {
        Self::check_family_p(p, "exp_linear")?;
        if p == 1.0 {
            return Ok(Self::exp_minus_linear());
        }
        Ok(Self::new(
            Shape::ExpMinusLinearPow { p },
            "exp_linear",
            vec![("p".into(), p)],
        ))
    }

    /// `e^{x^p} - 1`. Needs `p > 1`: at `p = 1` the slope at zero is
    /// positive and the conjugate vanishes on `[0, 1]`.
    pub fn exp_pow_minus_one(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return invalid(format!("exp_pow: exponent p must be > 1, got {p}"));
        }
        Ok(Self::new(
            Shape::ExpPowMinusOne { p },
            "exp_pow",
            vec![("p".into(), p)],
        ))
    }

    /// `(cosh x - 1)^p`, `p >= 1`.
    pub fn cosh_pow(p: f64) -> Result<Self> {
        Self::check_family_p(p, "cosh_pow")?;
        if p == 1.0 {
            return Ok(Self::cosh_minus_one());
        }
        Ok(Self::new(Shape::CoshPow { p }, "cosh_pow", vec![("p".into(), p)]))
    }

    /// A user-supplied evaluator. Without `derivative`, central differences
    /// are used wherever a derivative is needed.
    pub fn custom(
        label: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: Option<ScalarFn>,
    ) -> Self {
        Self::new(
            Shape::Custom {
                eval: Arc::new(eval),
                derivative,
            },
            label,
            Vec::new(),
        )
    }

    /// `value * self(arg * x)`.
    pub fn rescaled(&self, arg: f64, value: f64) -> Result<Self> {
        if !(arg > 0.0 && value > 0.0 && arg.is_finite() && value.is_finite()) {
            return invalid("rescaling factors must be positive and finite");
        }
        Ok(Self::new(
            Shape::Rescaled {
                inner: Box::new(self.clone()),
                arg,
                value,
            },
            format!("{value}*{}({arg}x)", self.label),
            Vec::new(),
        ))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// `(coef, exp)` when this is exactly `coef * x^exp`.
    pub fn as_power(&self) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Power { coef, exp } => Some((coef, exp)),
            _ => None,
        }
    }

    pub fn is_numerical_conjugate(&self) -> bool {
        matches!(self.shape, Shape::Conjugate(_))
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Power { coef, exp } => coef * x.powf(*exp),
            Shape::LinearDual { slope } => {
                if x <= *slope {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Shape::CoshMinusOne => cosh_minus_one(x),
            Shape::Entropy => {
                if x < 1e-2 {
                    series_entropy(x)
                } else {
                    (1.0 + x) * x.ln_1p() - x
                }
            }
            Shape::ExpMinusLinear => exp_minus_linear(x),
            Shape::X2LogPow { p } => (x * x * x.ln_1p()).powf(*p),
            Shape::ExpMinusLinearPow { p } => exp_minus_linear(x).powf(*p),
            Shape::ExpPowMinusOne { p } => x.powf(*p).exp_m1(),
            Shape::CoshPow { p } => cosh_minus_one(x).powf(*p),
            Shape::Conjugate(inner) => match conjugate(inner, x) {
                Ok(v) => v,
                Err(Error::ConjugateInfinite { .. }) => f64::INFINITY,
                Err(_) => f64::NAN,
            },
            Shape::SqrtArg(inner) => inner.eval(x.sqrt()),
            Shape::Rescaled { inner, arg, value } => value * inner.eval(arg * x),
            Shape::DensityIntegral { density, inverse } => {
                if *inverse {
                    integrate(|t| density.inverse(t), 0.0, x, 1e-11)
                } else {
                    integrate(|t| density.eval(t), 0.0, x, 1e-11)
                }
            }
            Shape::Custom { eval, .. } => eval(x),
        }
    }

    /// True when [`derivative`](Self::derivative) does not rely on finite differences.
    pub fn has_analytic_derivative(&self) -> bool {
        match &self.shape {
            Shape::LinearDual { .. } => false,
            Shape::Conjugate(inner) | Shape::SqrtArg(inner) => inner.has_analytic_derivative(),
            Shape::Rescaled { inner, .. } => inner.has_analytic_derivative(),
            Shape::Custom { derivative, .. } => derivative.is_some(),
            _ => true,
        }
    }

    /// Right derivative at `x`.
    pub fn derivative(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match &self.shape {
            Shape::Power { coef, exp } => {
                if *exp == 1.0 {
                    *coef
                } else {
                    coef * exp * x.powf(exp - 1.0)
                }
            }
            Shape::LinearDual { slope } => {
                if x < *slope {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Shape::CoshMinusOne => x.sinh(),
            Shape::Entropy => x.ln_1p(),
            Shape::ExpMinusLinear => x.exp_m1(),
            Shape::X2LogPow { p } => {
                let l = x.ln_1p();
                let g = x * x * l;
                let dg = 2.0 * x * l + x * x / (1.0 + x);
                if *p == 1.0 {
                    dg
                } else {
                    p * g.powf(p - 1.0) * dg
                }
            }
            Shape::ExpMinusLinearPow { p } => {
                p * exp_minus_linear(x).powf(p - 1.0) * x.exp_m1()
            }
            Shape::ExpPowMinusOne { p } => {
                let xp = x.powf(*p);
                p * x.powf(p - 1.0) * xp.exp()
            }
            Shape::CoshPow { p } => p * cosh_minus_one(x).powf(p - 1.0) * x.sinh(),
            Shape::Conjugate(inner) => match conjugate_argmax(inner, x) {
                Ok((_, arg)) => arg,
                Err(Error::ConjugateInfinite { .. }) => f64::INFINITY,
                Err(_) => f64::NAN,
            },
            Shape::SqrtArg(inner) => {
                let t = x.sqrt().max(1e-150);
                inner.derivative(t) / (2.0 * t)
            }
            Shape::Rescaled { inner, arg, value } => value * arg * inner.derivative(arg * x),
            Shape::DensityIntegral { density, inverse } => {
                if *inverse {
                    density.inverse(x)
                } else {
                    density.eval(x)
                }
            }
            Shape::Custom {
                derivative: Some(d),
                ..
            } => d(x),
            Shape::Custom { .. } => self.numeric_derivative(x),
        }
    }

    /// Central difference with step `max(1e-6, 1e-6 x)`, one-sided at the origin.
    pub fn numeric_derivative(&self, x: f64) -> f64 {
        let h = (1e-6 * x).max(1e-6);
        let lo = (x - h).max(0.0);
        let hi = x + h;
        (self.eval(hi) - self.eval(lo)) / (hi - lo)
    }

    /// Closed-form conjugate when one is known.
    pub fn closed_conjugate(&self) -> Option<YoungFunction> {
        let conj_label = format!("conj({})", self.label);
        match &self.shape {
            Shape::Power { coef, exp } => {
                if *exp == 1.0 {
                    return Some(Self::new(
                        Shape::LinearDual { slope: *coef },
                        conj_label,
                        Vec::new(),
                    ));
                }
                let r = *exp;
                let dual = r / (r - 1.0);
                let c = (1.0 - 1.0 / r) * (coef * r).powf(-1.0 / (r - 1.0));
                if self.label == "power" {
                    return Some(Self::new(
                        Shape::Power {
                            coef: 1.0 / dual,
                            exp: dual,
                        },
                        "power",
                        vec![("p".into(), dual)],
                    ));
                }
                Some(Self::new(
                    Shape::Power { coef: c, exp: dual },
                    "scaled_power",
                    vec![("coef".into(), c), ("exp".into(), dual)],
                ))
            }
            Shape::LinearDual { slope } => Some(Self::new(
                Shape::Power {
                    coef: *slope,
                    exp: 1.0,
                },
                conj_label,
                Vec::new(),
            )),
            Shape::Entropy => Some(Self::exp_minus_linear()),
            Shape::ExpMinusLinear => Some(Self::entropy()),
            Shape::Conjugate(inner) => Some((**inner).clone()),
            Shape::Rescaled { inner, arg, value } => {
                let ic = inner.closed_conjugate()?;
                Some(Self::new(
                    Shape::Rescaled {
                        inner: Box::new(ic),
                        arg: 1.0 / (arg * value),
                        value: *value,
                    },
                    conj_label,
                    Vec::new(),
                ))
            }
            Shape::DensityIntegral { density, inverse } => Some(Self::new(
                Shape::DensityIntegral {
                    density: density.clone(),
                    inverse: !inverse,
                },
                conj_label,
                Vec::new(),
            )),
            _ => None,
        }
    }

    /// The conjugate evaluated pointwise by [`conjugate`].
    pub fn numerical_conjugate(&self) -> YoungFunction {
        Self::new(
            Shape::Conjugate(Box::new(self.clone())),
            format!("conj({})", self.label),
            Vec::new(),
        )
    }

    /// Closed-form conjugate if known, else the numerical one.
    pub fn conjugate_function(&self) -> (YoungFunction, ConjugationMode) {
        match self.closed_conjugate() {
            Some(c) => (c, ConjugationMode::ClosedForm),
            None => (self.numerical_conjugate(), ConjugationMode::Numerical),
        }
    }

    /// Checks the Young-function invariants on the working grid.
    pub fn validate(&self) -> Result<()> {
        let z = self.eval(0.0);
        if z != 0.0 {
            return invalid(format!("{self}: value at 0 is {z}, expected 0"));
        }
        let grid = working_grid(40);
        let vals: Vec<f64> = grid.iter().map(|&x| self.eval(x)).collect();
        for (x, v) in grid.iter().zip(&vals) {
            if v.is_nan() || *v < 0.0 {
                return invalid(format!("{self}: invalid value {v} at x = {x}"));
            }
        }
        for (i, w) in vals.windows(2).enumerate() {
            if w[0].is_finite() && w[1] <= w[0] {
                return invalid(format!(
                    "{self}: not strictly increasing between {} and {}",
                    grid[i],
                    grid[i + 1]
                ));
            }
        }
        // Convexity on a coarser grid of pairs.
        let coarse = working_grid(20);
        let cv: Vec<f64> = coarse.iter().map(|&x| self.eval(x)).collect();
        for i in 0..coarse.len() {
            for j in i + 1..coarse.len() {
                for t in [0.25, 0.5, 0.75] {
                    let rhs = t * cv[i] + (1.0 - t) * cv[j];
                    if !rhs.is_finite() {
                        continue;
                    }
                    let lhs = self.eval(t * coarse[i] + (1.0 - t) * coarse[j]);
                    if lhs > rhs + 1e-9 * rhs.abs() + 1e-300 {
                        return invalid(format!(
                            "{self}: convexity fails between {} and {} (t = {t})",
                            coarse[i], coarse[j]
                        ));
                    }
                }
            }
        }
        // Growth: a convex, strictly increasing function tends to infinity;
        // check the tail keeps growing.
        let far = [1e3, 1e4, 1e5, 1e6].map(|x| self.eval(x));
        if far.windows(2).any(|w| w[0].is_finite() && w[1] <= w[0]) {
            return invalid(format!("{self}: does not grow on [1e3, 1e6]"));
        }
        Ok(())
    }
}

/// How the second member of a pair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugationMode {
    ClosedForm,
    Numerical,
}

/// `(value, argmax)` of `sup { x y - phi(x) : x >= 0 }`.
pub fn conjugate_argmax(phi: &YoungFunction, y: f64) -> Result<(f64, f64)> {
    if !(y >= 0.0) || !y.is_finite() {
        return invalid(format!("conjugate needs finite y >= 0, got {y}"));
    }
    if y == 0.0 {
        return Ok((0.0, 0.0));
    }
    let g = |x: f64| x * y - phi.eval(x);
    let slope = |x: f64| phi.eval(x) / x;

    // Smallest power of two with phi(x)/x > y; by convexity the maximiser lies below it.
    let mut hi = 1.0_f64;
    if slope(hi) > y {
        while hi > TINY_X && slope(0.5 * hi) > y {
            hi *= 0.5;
        }
    } else {
        while slope(hi) <= y {
            hi *= 2.0;
            if hi > CONJUGATE_X_CAP {
                return Err(Error::ConjugateInfinite { y });
            }
        }
    }
    // Walk down while the concave objective is not increasing.
    let mut upper = hi;
    let mut x = hi;
    while x > TINY_X && g(0.5 * x) >= g(x) {
        upper = x;
        x *= 0.5;
    }
    let mut lo = if x > TINY_X { 0.5 * x } else { 0.0 };
    let mut up = upper.min(hi);

    for _ in 0..TERNARY_ITERS {
        if up - lo <= 1e-16 * up {
            break;
        }
        let m1 = lo + (up - lo) / 3.0;
        let m2 = up - (up - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            up = m2;
        }
    }
    let mut arg = 0.5 * (lo + up);
    let mut best = g(arg);

    // Sharpen the maximiser through the first-order condition phi'(x) = y.
    if phi.has_analytic_derivative() {
        let (mut a, mut b) = (0.5 * x.max(TINY_X), upper.min(hi).max(arg));
        if phi.derivative(a) < y && phi.derivative(b) >= y {
            let (l, r) = bisect_increasing(|t| phi.derivative(t), y, a, b, BISECT_ITERS);
            a = l;
            b = r;
            for cand in [a, b, 0.5 * (a + b)] {
                let v = g(cand);
                if v > best {
                    best = v;
                    arg = cand;
                }
            }
        }
    }
    Ok((best.max(0.0), arg))
}

/// `sup { x y - phi(x) : x >= 0 }` by bracket expansion and ternary search.
pub fn conjugate(phi: &YoungFunction, y: f64) -> Result<f64> {
    conjugate_argmax(phi, y).map(|(v, _)| v)
}

/// `x` with `phi(x) = y`, by bracketed bisection.
pub fn inverse(phi: &YoungFunction, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return invalid(format!("inverse needs y >= 0, got {y}"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut hi = 1.0_f64;
    while phi.eval(hi) < y {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NumericalFailure(format!(
                "{phi}: inverse bracket overflow at y = {y}"
            )));
        }
    }
    let mut lo = 0.5 * hi;
    while lo > TINY_X && phi.eval(lo) >= y {
        lo *= 0.5;
    }
    let (lo, hi) = bisect_increasing(|x| phi.eval(x), y, lo, hi, BISECT_ITERS);
    // Return whichever endpoint lands closer in value.
    let (dl, dh) = ((phi.eval(lo) - y).abs(), (phi.eval(hi) - y).abs());
    Ok(if dl < dh { lo } else { hi })
}

/// A complementary pair `(phi, psi)` with `psi` the conjugate of `phi`.
#[derive(Debug, Clone)]
pub struct ComplementaryPair {
    pub phi: YoungFunction,
    pub psi: YoungFunction,
    pub mode: ConjugationMode,
    id: String,
}

/// Outcome of an inequality sweep over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCheck {
    pub ok: bool,
    pub checked: usize,
    pub failures: usize,
    /// Smallest slack `rhs - lhs` seen, relative to the tolerance scale.
    pub worst_margin: f64,
    pub worst_at: Vec<f64>,
}

impl Default for GridCheck {
    fn default() -> Self {
        Self::new()
    }
}

impl GridCheck {
    fn new() -> Self {
        Self {
            ok: true,
            checked: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            worst_at: Vec::new(),
        }
    }

    /// Records one instance of `lhs <= rhs + tol`.
    pub(crate) fn record(&mut self, lhs: f64, rhs: f64, tol: f64, at: &[f64]) {
        self.checked += 1;
        let margin = if rhs.is_infinite() && rhs > 0.0 {
            f64::INFINITY
        } else {
            (rhs + tol - lhs) / (1.0 + rhs.abs())
        };
        let failed = !(lhs <= rhs + tol);
        if failed {
            self.failures += 1;
            self.ok = false;
        }
        if margin < self.worst_margin || (failed && margin.is_nan()) {
            self.worst_margin = margin;
            self.worst_at = at.to_vec();
        }
    }

    pub fn merge(&mut self, other: GridCheck) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.ok &= other.ok;
        if other.worst_margin < self.worst_margin {
            self.worst_margin = other.worst_margin;
            self.worst_at = other.worst_at;
        }
    }
}

impl ComplementaryPair {
    /// Assembles a pair without validation. Callers vouch for complementarity.
    pub fn from_parts(
        id: impl Into<String>,
        phi: YoungFunction,
        psi: YoungFunction,
        mode: ConjugationMode,
    ) -> Self {
        Self {
            phi,
            psi,
            mode,
            id: id.into(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn swapped(&self) -> Self {
        Self {
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            mode: self.mode,
            id: format!("{}~swapped", self.id),
        }
    }

    /// Young's inequality `x y <= phi(x) + psi(y)` on the product grid.
    pub fn check_young_inequality(&self, xs: &[f64], ys: &[f64]) -> GridCheck {
        let mut check = GridCheck::new();
        let pv: Vec<f64> = xs.iter().map(|&x| self.phi.eval(x)).collect();
        let qv: Vec<f64> = ys.iter().map(|&y| self.psi.eval(y)).collect();
        for (x, p) in xs.iter().zip(&pv) {
            for (y, q) in ys.iter().zip(&qv) {
                let lhs = x * y;
                check.record(lhs, p + q, 1e-9 * (1.0 + lhs), &[*x, *y]);
            }
        }
        check
    }

    /// `x <= phi^{-1}(x) psi^{-1}(x) <= 2x` on the grid.
    pub fn check_inverse_sandwich(&self, xs: &[f64]) -> Result<GridCheck> {
        let mut check = GridCheck::new();
        for &x in xs {
            let prod = inverse(&self.phi, x)? * inverse(&self.psi, x)?;
            let tol = 1e-8 + 1e-12 * x;
            check.record(x, prod, tol, &[x]);
            check.record(prod, 2.0 * x, tol, &[x]);
        }
        Ok(check)
    }

    /// Default invariant battery used at construction time.
    pub fn validate(&self) -> Result<()> {
        self.phi.validate()?;
        self.psi.validate()?;
        let xs = log_grid(1e-6, 1e2, 16);
        let young = self.check_young_inequality(&xs, &xs);
        if !young.ok {
            return Err(Error::InvalidInput(format!(
                "{}: Young inequality fails at {:?}",
                self.id, young.worst_at
            )));
        }
        let sandwich = self.check_inverse_sandwich(&working_grid(16))?;
        if !sandwich.ok {
            return Err(Error::InvalidInput(format!(
                "{}: inverse sandwich fails at {:?}",
                self.id, sandwich.worst_at
            )));
        }
        Ok(())
    }
}

/// Builds `(phi, conj phi)`, closed form when known, and validates it.
pub fn make_pair(phi: YoungFunction) -> Result<ComplementaryPair> {
    phi.validate()?;
    let (psi, mode) = phi.conjugate_function();
    let id = phi.to_string();
    let pair = ComplementaryPair::from_parts(id, phi, psi, mode);
    pair.validate()?;
    Ok(pair)
}

/// The pair `Phi = int_0^x varphi`, `Psi = int_0^y varphi^{-1}`.
pub fn from_density(
    label: impl Into<String>,
    varphi: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Result<ComplementaryPair> {
    let label = label.into();
    let density = Density {
        label: label.clone(),
        varphi: Arc::new(varphi),
    };
    let at0 = density.eval(0.0);
    if at0 != 0.0 {
        return invalid(format!("density {label}: value at 0 is {at0}"));
    }
    let probe = log_grid(1e-6, 1e4, 60);
    let vals: Vec<f64> = probe.iter().map(|&x| density.eval(x)).collect();
    if vals.iter().any(|v| v.is_nan() || *v < 0.0) {
        return invalid(format!("density {label}: negative or NaN values"));
    }
    for (i, w) in vals.windows(2).enumerate() {
        if w[0].is_finite() && w[1] <= w[0] {
            return invalid(format!(
                "density {label}: not strictly increasing near x = {}",
                probe[i + 1]
            ));
        }
    }
    let density = Arc::new(density);
    let phi = YoungFunction::new(
        Shape::DensityIntegral {
            density: density.clone(),
            inverse: false,
        },
        format!("int({})", density.label),
        Vec::new(),
    );
    let psi = YoungFunction::new(
        Shape::DensityIntegral {
            density: density.clone(),
            inverse: true,
        },
        format!("int(inv {})", density.label),
        Vec::new(),
    );
    let pair = ComplementaryPair::from_parts(
        format!("density:{label}"),
        phi,
        psi,
        ConjugationMode::ClosedForm,
    );
    pair.validate()?;
    Ok(pair)
}

/// Result of a Delta_2 probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Delta2 {
    Bounded(f64),
    Unbounded,
}

/// Sup of `phi(2x)/phi(x)` over a log grid in `(0, x_max]`.
pub fn delta2_estimate(phi: &YoungFunction, x_max: f64) -> Result<Delta2> {
    if !(x_max > 0.0) {
        return invalid("delta2_estimate needs x_max > 0");
    }
    let lo = (crate::grid::WORK_MIN).min(x_max * 1e-3);
    let per_decade = 20.0;
    let n = (((x_max / lo).log10() * per_decade).ceil() as usize).max(2) + 1;
    let grid = log_grid(lo, x_max, n);
    let mut running = Vec::with_capacity(grid.len());
    let mut sup = 0.0_f64;
    for &x in &grid {
        let r = phi.eval(2.0 * x) / phi.eval(x);
        if !r.is_finite() {
            return Ok(Delta2::Unbounded);
        }
        sup = sup.max(r);
        running.push(sup);
    }
    let decade_start = grid.iter().position(|&x| x >= x_max / 10.0).unwrap_or(0);
    let before = running[decade_start.saturating_sub(1)];
    let growth = (sup - before) / before;
    if growth < 1e-3 {
        Ok(Delta2::Bounded(sup))
    } else {
        Ok(Delta2::Unbounded)
    }
}

/// `phi1(a x) <= phi2(x) <= phi1(b x)` for every grid `x`.
pub fn strong_equiv_check(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    a: f64,
    b: f64,
    grid: &[f64],
) -> Result<bool> {
    if grid.is_empty() {
        return invalid("strong_equiv_check needs a non-empty grid");
    }
    if !(a > 0.0 && a <= b) {
        return invalid(format!("strong equivalence needs 0 < a <= b, got ({a}, {b})"));
    }
    let slack = |v: f64| v + 1e-12 * v.abs();
    Ok(grid.iter().all(|&x| {
        let mid = phi2.eval(x);
        phi1.eval(a * x) <= slack(mid) && mid <= slack(phi1.eval(b * x))
    }))
}

/// Tightest `(a, b)` for which [`strong_equiv_check`] can pass on `grid`:
/// the extremes of `phi1^{-1}(phi2(x)) / x`. `None` when they degenerate.
pub fn equivalence_constants(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    grid: &[f64],
) -> Result<Option<(f64, f64)>> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for &x in grid {
        let r = inverse(phi1, phi2.eval(x))? / x;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if lo > 0.0 && hi.is_finite() && !grid.is_empty() {
        Ok(Some((lo * (1.0 - 1e-9), hi * (1.0 + 1e-9))))
    } else {
        Ok(None)
    }
}

/// Outcome of [`sqrt_transform`].
#[derive(Debug, Clone)]
pub enum SqrtOutcome {
    Accepted(YoungFunction),
    Rejected { at: f64, reason: String },
}

impl SqrtOutcome {
    pub fn accepted(&self) -> Option<&YoungFunction> {
        match self {
            SqrtOutcome::Accepted(f) => Some(f),
            SqrtOutcome::Rejected { .. } => None,
        }
    }
}

/// `psi(sqrt x)`, accepted when `psi'(x)/x` is nondecreasing on the probe grid.
pub fn sqrt_transform(psi: &YoungFunction) -> Result<SqrtOutcome> {
    let grid = working_grid(60);
    let tol = if psi.has_analytic_derivative() { 1e-9 } else { 1e-6 };
    let mut prev: Option<(f64, f64)> = None;
    for &x in &grid {
        let d = psi.derivative(x);
        if d.is_nan() {
            return invalid(format!("{psi}: derivative not computable at x = {x}"));
        }
        let ratio = d / x;
        if let Some((px, pr)) = prev {
            if pr.is_finite() && ratio < pr * (1.0 - tol) {
                return Ok(SqrtOutcome::Rejected {
                    at: x,
                    reason: format!("psi'(x)/x decreases between {px:e} and {x:e}"),
                });
            }
        }
        prev = Some((x, ratio));
    }
    let out = match psi.shape {
        Shape::Power { coef, exp } if exp >= 2.0 => YoungFunction::new(
            Shape::Power {
                coef,
                exp: exp / 2.0,
            },
            "scaled_power",
            vec![("coef".into(), coef), ("exp".into(), exp / 2.0)],
        ),
        _ => YoungFunction::new(
            Shape::SqrtArg(Box::new(psi.clone())),
            format!("{}(sqrt x)", psi.label),
            Vec::new(),
        ),
    };
    Ok(SqrtOutcome::Accepted(out))
}

/// Catalog address: family id plus optional exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

impl YoungSpec {
    pub fn new(family: impl Into<String>, p: Option<f64>) -> Self {
        Self {
            family: family.into(),
            p,
        }
    }
}

/// Family ids understood by [`lookup`].
pub const CATALOG_FAMILIES: &[&str] = &[
    "power",
    "cosh",
    "entropy",
    "x2log",
    "exp_linear",
    "exp_pow",
    "cosh_pow",
];

fn pair_listing_psi(id: String, psi: YoungFunction) -> ComplementaryPair {
    let phi = psi.numerical_conjugate();
    ComplementaryPair::from_parts(id, phi, psi, ConjugationMode::Numerical)
}

/// Resolves a catalog entry. Families whose second member is listed
/// (`x2log`, `exp_linear`, `exp_pow`, `cosh_pow`) carry the listed function
/// as `psi` and its numerical conjugate as `phi`.
pub fn lookup(spec: &YoungSpec) -> Result<ComplementaryPair> {
    let need_p = || {
        spec.p
            .ok_or_else(|| Error::InvalidInput(format!("family {} needs parameter p", spec.family)))
    };
    let id = match spec.p {
        Some(p) => format!("{}[p={p}]", spec.family),
        None => spec.family.clone(),
    };
    match spec.family.as_str() {
        "power" => {
            let phi = YoungFunction::power(need_p()?)?;
            let psi = phi.closed_conjugate().expect("power has a closed conjugate");
            Ok(ComplementaryPair::from_parts(id, phi, psi, ConjugationMode::ClosedForm))
        }
        "cosh" => {
            let phi = YoungFunction::cosh_minus_one();
            let psi = phi.numerical_conjugate();
            Ok(ComplementaryPair::from_parts(id, phi, psi, ConjugationMode::Numerical))
        }
        "entropy" => Ok(ComplementaryPair::from_parts(
            id,
            YoungFunction::entropy(),
            YoungFunction::exp_minus_linear(),
            ConjugationMode::ClosedForm,
        )),
        "x2log" => Ok(pair_listing_psi(id, YoungFunction::x2log_pow(spec.p.unwrap_or(1.0))?)),
        "exp_linear" => Ok(pair_listing_psi(
            id,
            YoungFunction::exp_minus_linear_pow(spec.p.unwrap_or(2.0))?,
        )),
        "exp_pow" => Ok(pair_listing_psi(
            id,
            YoungFunction::exp_pow_minus_one(spec.p.unwrap_or(2.0))?,
        )),
        "cosh_pow" => Ok(pair_listing_psi(id, YoungFunction::cosh_pow(spec.p.unwrap_or(1.5))?)),
        other => invalid(format!("unknown Young family '{other}'")),
    }
}

/// Specs of the default catalog.
pub fn catalog_specs() -> Vec<YoungSpec> {
    let mut specs: Vec<YoungSpec> = [1.25, 1.5, 2.0, 3.0, 4.0]
        .into_iter()
        .map(|p| YoungSpec::new("power", Some(p)))
        .collect();
    specs.push(YoungSpec::new("cosh", None));
    specs.push(YoungSpec::new("entropy", None));
    specs.push(YoungSpec::new("x2log", Some(1.0)));
    specs.push(YoungSpec::new("exp_linear", Some(2.0)));
    specs.push(YoungSpec::new("exp_pow", Some(2.0)));
    specs.push(YoungSpec::new("cosh_pow", Some(1.5)));
    specs
}

/// The named catalog of complementary pairs.
pub fn catalog() -> Vec<ComplementaryPair> {
    catalog_specs()
        .iter()
        .map(|s| lookup(s).expect("catalog specs are valid"))
        .collect()
}
