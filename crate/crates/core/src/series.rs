//! Truncated formal power series as elements of the groupoid of formal
//! transformations of the line.
//!
//! An element `g = Σ a_k (x - p)^k` has source `p` and target `a_0`, and must
//! have `a_1 != 0`. Every operation takes an explicit output order `N`; feeding
//! a series of lower order is an error rather than an implicit zero pad.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, ParseError, Result};
use crate::scalar::{parse_rational, Field, Scalar, Q};

/// A truncated element of the groupoid: base point plus `N + 1` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupoidElement<S> {
    base_point: S,
    coeffs: Vec<S>,
}

/// Builds an element, rejecting empty lists and a vanishing linear term.
pub fn make_series<S: Scalar>(base_point: S, coeffs: Vec<S>) -> Result<GroupoidElement<S>> {
    GroupoidElement::new(base_point, coeffs)
}

impl<S: Scalar> GroupoidElement<S> {
    pub fn new(base_point: S, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        match coeffs.get(1) {
            Some(a1) if !a1.is_zero() => Ok(Self { base_point, coeffs }),
            _ => Err(Error::NotGroupoidElement),
        }
    }

    /// The identity transformation at `p`, truncated at order `n`.
    pub fn identity_at(p: S, n: usize) -> Self {
        let mut coeffs = vec![S::zero(); n.max(1) + 1];
        coeffs[0] = p.clone();
        coeffs[1] = S::one();
        Self { base_point: p, coeffs }
    }

    pub fn base_point(&self) -> &S {
        &self.base_point
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn source(&self) -> &S {
        &self.base_point
    }

    pub fn target(&self) -> &S {
        &self.coeffs[0]
    }

    /// Coefficients `a_1, a_2, ...` with the constant replaced by zero.
    fn deviation(&self, n: usize) -> Vec<S> {
        let mut d = self.coeffs[..=n].to_vec();
        d[0] = S::zero();
        d
    }

    fn require_order(&self, n: usize) -> Result<()> {
        if self.order() < n {
            Err(Error::InsufficientOrder { have: self.order(), need: n })
        } else {
            Ok(())
        }
    }

    /// Drops coefficients above order `n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        self.require_order(n)?;
        Self::new(self.base_point.clone(), self.coeffs[..=n].to_vec())
    }

    /// Value of the truncated polynomial at `x`.
    pub fn eval(&self, x: &S) -> S {
        let dx = x.clone() - self.base_point.clone();
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * dx.clone() + c.clone())
    }
}

impl GroupoidElement<Q> {
    /// `{"base_point":"p/q","coeffs":["n/d",...]}`
    pub fn to_json(&self) -> Value {
        json!({
            "base_point": self.base_point.to_string(),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::from(ParseError::BadDocument(m.to_string()));
        let base = v.get("base_point").ok_or_else(|| bad("missing base_point"))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing coeffs array"))?;
        let base = Q::from_json(base)?;
        let coeffs = coeffs.iter().map(Q::from_json).collect::<Result<Vec<_>, _>>()?;
        Self::new(base, coeffs)
    }
}

impl<S: Scalar> fmt::Display for GroupoidElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = if self.base_point.is_zero() {
            "x".to_string()
        } else {
            format!("(x - {})", self.base_point.render())
        };
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.render())?,
                1 => write!(f, "{}*{x}", c.render())?,
                _ => write!(f, "{}*{x}^{k}", c.render())?,
            }
        }
        write!(f, " + O({x}^{})", self.order() + 1)
    }
}

/// Product of two coefficient lists, truncated after degree `n`.
pub fn mul_truncated<S: Scalar>(a: &[S], b: &[S], n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

/// Coefficients of `g^m` about `s(g)` through order `n`. `m = 0` gives `1`.
pub fn pointwise_power<S: Scalar>(g: &GroupoidElement<S>, m: usize, n: usize) -> Result<Vec<S>> {
    g.require_order(n)?;
    Ok(power_coeffs(&g.coeffs[..=n], m, n))
}

pub(crate) fn power_coeffs<S: Scalar>(g: &[S], mut m: usize, n: usize) -> Vec<S> {
    let mut acc = vec![S::zero(); n + 1];
    acc[0] = S::one();
    let mut base = g.to_vec();
    base.resize(n + 1, S::zero());
    while m > 0 {
        if m & 1 == 1 {
            acc = mul_truncated(&acc, &base, n);
        }
        m >>= 1;
        if m > 0 {
            base = mul_truncated(&base, &base, n);
        }
    }
    acc
}

/// `g1 ∘ g2` truncated to order `n`, defined only when `t(g2) = s(g1)`.
///
/// The inner deviation `g2 - t(g2)` has zero constant term, so substituting it
/// into the outer series is a finite computation at every order.
pub fn compose<S: Scalar>(
    g1: &GroupoidElement<S>,
    g2: &GroupoidElement<S>,
    n: usize,
) -> Result<GroupoidElement<S>> {
    if g2.target() != g1.source() {
        return Err(Error::GroupoidIncompatible {
            inner_target: g2.target().render(),
            outer_source: g1.source().render(),
        });
    }
    g1.require_order(n)?;
    g2.require_order(n)?;
    let d = g2.deviation(n);
    let mut acc = vec![S::zero(); n + 1];
    for b in g1.coeffs[..=n].iter().rev() {
        acc = mul_truncated(&acc, &d, n);
        acc[0] = acc[0].clone() + b.clone();
    }
    GroupoidElement::new(g2.base_point.clone(), acc)
}

/// Compositional inverse through order `n`, based at `t(g)`.
///
/// Solves `Σ c_k d^k = (x - p)` one degree at a time, where `d = g - t(g)`;
/// the system is triangular with diagonal `a_1^k`.
pub fn invert<S: Field>(g: &GroupoidElement<S>, n: usize) -> Result<GroupoidElement<S>> {
    if n < 1 {
        return Err(Error::InvalidArgument("inversion needs order >= 1".into()));
    }
    g.require_order(n)?;
    let d = g.deviation(n);
    let a1 = d[1].clone();
    // powers[k] = d^k truncated at n; column n of the triangular system
    let mut powers: Vec<Vec<S>> = vec![vec![S::zero(); n + 1], d.clone()];
    powers[0][0] = S::one();
    for k in 2..=n {
        let next = mul_truncated(&powers[k - 1], &d, n);
        powers.push(next);
    }
    let mut c = vec![S::zero(); n + 1];
    c[0] = g.base_point.clone();
    let mut a1_pow = S::one();
    for m in 1..=n {
        a1_pow = a1_pow * a1.clone();
        let mut rhs = if m == 1 { S::one() } else { S::zero() };
        for k in 1..m {
            rhs = rhs - c[k].clone() * powers[k][m].clone();
        }
        c[m] = rhs / a1_pow.clone();
    }
    GroupoidElement::new(g.target().clone(), c)
}

/// Named series available without a JSON file.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    Identity,
    Translation(Q),
    /// `1 - x + x^2 - ...`
    Geometric,
    /// `-x + x^2 - x^3 + ...`
    H,
    /// `ln(1 + z)`
    Ln1p,
    /// `e^z - 1`
    Expm1,
}

impl Builtin {
    pub fn name(&self) -> String {
        match self {
            Builtin::Identity => "identity".into(),
            Builtin::Translation(a) => format!("translation({a})"),
            Builtin::Geometric => "geometric".into(),
            Builtin::H => "h".into(),
            Builtin::Ln1p => "ln1p".into(),
            Builtin::Expm1 => "expm1".into(),
        }
    }

    /// k-th coefficient about 0. All builtins are based at 0.
    pub fn coefficient(&self, k: usize) -> Q {
        let sign = |k: usize| if k % 2 == 0 { Q::one() } else { -Q::one() };
        match self {
            Builtin::Identity => indicator(k == 1),
            Builtin::Translation(a) => match k {
                0 => a.clone(),
                1 => Q::one(),
                _ => Q::zero(),
            },
            Builtin::Geometric => sign(k),
            Builtin::H => {
                if k == 0 {
                    Q::zero()
                } else {
                    sign(k)
                }
            }
            Builtin::Ln1p => {
                if k == 0 {
                    Q::zero()
                } else {
                    -sign(k) / Q::from_integer(BigInt::from(k))
                }
            }
            Builtin::Expm1 => {
                if k == 0 {
                    Q::zero()
                } else {
                    Q::one() / Q::from_integer(factorial(k))
                }
            }
        }
    }

    /// Highest nonzero degree, when the builtin is a polynomial.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Builtin::Identity | Builtin::Translation(_) => Some(1),
            _ => None,
        }
    }
}

fn indicator(b: bool) -> Q {
    if b {
        Q::one()
    } else {
        Q::zero()
    }
}

pub(crate) fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

impl FromStr for Builtin {
    type Err = ParseError;

    /// Accepts `identity`, `geometric`, `h`, `ln1p`, `expm1`,
    /// `translation(a)` and `translation:a`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let arg = s
            .strip_prefix("translation(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("translation:"));
        if let Some(a) = arg {
            return Ok(Builtin::Translation(parse_rational(a)?));
        }
        match s {
            "identity" => Ok(Builtin::Identity),
            "geometric" => Ok(Builtin::Geometric),
            "h" => Ok(Builtin::H),
            "ln1p" => Ok(Builtin::Ln1p),
            "expm1" => Ok(Builtin::Expm1),
            other => Err(ParseError::UnknownBuiltin(other.to_string())),
        }
    }
}

/// Truncation of a named series at order `n >= 1`.
pub fn builtin_series(name: &Builtin, n: usize) -> Result<GroupoidElement<Q>> {
    if n < 1 {
        return Err(Error::InvalidArgument("builtin series need order >= 1".into()));
    }
    GroupoidElement::new(Q::zero(), (0..=n).map(|k| name.coefficient(k)).collect())
}

/// A series known through a coefficient oracle rather than a finite list.
///
/// Used where infinite matrices are needed: the Carleman handle of a builtin
/// queries as many coefficients as a window requires.
#[derive(Clone)]
pub struct InfiniteSeries<S> {
    name: String,
    base_point: S,
    coeff: Arc<dyn Fn(usize) -> S + Send + Sync>,
    degree: Option<usize>,
}

impl<S: Scalar> InfiniteSeries<S> {
    pub fn from_fn(
        name: impl Into<String>,
        base_point: S,
        degree: Option<usize>,
        coeff: impl Fn(usize) -> S + Send + Sync + 'static,
    ) -> Result<Self> {
        if coeff(1).is_zero() {
            return Err(Error::NotGroupoidElement);
        }
        Ok(Self { name: name.into(), base_point, coeff: Arc::new(coeff), degree })
    }

    /// The polynomial whose coefficients are those of `g`; zero above its order.
    pub fn polynomial(g: &GroupoidElement<S>) -> Self {
        let coeffs = g.coeffs.clone();
        let degree = coeffs.iter().rposition(|c| !c.is_zero());
        Self {
            name: "polynomial".into(),
            base_point: g.base_point.clone(),
            coeff: Arc::new(move |k| coeffs.get(k).cloned().unwrap_or_else(S::zero)),
            degree,
        }
    }

    pub fn builtin(b: &Builtin) -> Self {
        let name = b.name();
        let degree = b.degree();
        let b = b.clone();
        Self {
            name,
            base_point: S::zero(),
            coeff: Arc::new(move |k| S::from_rational(&b.coefficient(k))),
            degree,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_point(&self) -> &S {
        &self.base_point
    }

    pub fn target(&self) -> S {
        self.coefficient(0)
    }

    pub fn coefficient(&self, k: usize) -> S {
        match self.degree {
            Some(d) if k > d => S::zero(),
            _ => (self.coeff)(k),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn truncate(&self, n: usize) -> Result<GroupoidElement<S>> {
        GroupoidElement::new(self.base_point.clone(), (0..=n).map(|k| self.coefficient(k)).collect())
    }

    /// The isotropy part `τ_{-t(g)} ∘ g ∘ τ_{s(g)}`: same higher coefficients,
    /// zero constant, based at 0.
    pub fn isotropy_part(&self) -> Self {
        let inner = self.clone();
        Self {
            name: format!("isotropy({})", self.name),
            base_point: S::zero(),
            coeff: Arc::new(move |k| if k == 0 { S::zero() } else { inner.coefficient(k) }),
            degree: self.degree,
        }
    }
}

impl<S: Scalar> fmt::Debug for InfiniteSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfiniteSeries")
            .field("name", &self.name)
            .field("base_point", &self.base_point)
            .field("degree", &self.degree)
            .finish()
    }
}

impl<S: Scalar> From<&GroupoidElement<S>> for InfiniteSeries<S> {
    fn from(g: &GroupoidElement<S>) -> Self {
        Self::polynomial(g)
    }
}

/// Outer functions available for analytic substitution, given by their
/// Taylor coefficients at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticStream {
    /// `e^z`
    Exp,
    /// `ln(1 + z)`
    Ln1p,
    /// `1 / (1 - z)`
    GeometricKernel,
}

/// Default number of outer terms available to [`substitute_analytic`].
pub const DEFAULT_TERM_BUDGET: usize = 200;

impl AnalyticStream {
    pub fn name(self) -> &'static str {
        match self {
            AnalyticStream::Exp => "exp",
            AnalyticStream::Ln1p => "ln1p",
            AnalyticStream::GeometricKernel => "geometric-kernel",
        }
    }

    pub fn coefficient(self, k: usize) -> Q {
        match self {
            AnalyticStream::Exp => Q::one() / Q::from_integer(factorial(k)),
            AnalyticStream::Ln1p => Builtin::Ln1p.coefficient(k),
            AnalyticStream::GeometricKernel => Q::one(),
        }
    }

    /// Radius of convergence; `None` for entire functions.
    pub fn radius(self) -> Option<f64> {
        match self {
            AnalyticStream::Exp => None,
            AnalyticStream::Ln1p | AnalyticStream::GeometricKernel => Some(1.0),
        }
    }

    /// Bound on `Σ_{k>K} |o_k| R^k`, which dominates every coefficient of the
    /// discarded part when `R = |c| + Σ|d_j|` bounds the inner series.
    /// `None` when no finite bound exists.
    pub fn tail_bound(self, r: f64, k: usize) -> Option<f64> {
        match self {
            AnalyticStream::Exp => {
                // R^{K+1}/(K+1)! * e^R
                let mut term = 1.0f64;
                for i in 1..=k + 1 {
                    term *= r / i as f64;
                }
                Some(term * r.exp())
            }
            AnalyticStream::Ln1p | AnalyticStream::GeometricKernel => {
                if r < 1.0 {
                    Some(r.powi(k as i32 + 1) / (1.0 - r))
                } else {
                    None
                }
            }
        }
    }
}

/// Coefficients of `outer(inner(z))` through order `n`.
///
/// With a zero constant term the result is a finite exact computation.
/// Otherwise the outer series is summed to the first `K` whose tail bound is
/// below `tol`, up to `budget` terms.
pub fn substitute_analytic<S: Scalar>(
    outer: AnalyticStream,
    inner: &[S],
    n: usize,
    tol: f64,
    budget: usize,
) -> Result<Vec<S>> {
    if inner.len() < n + 1 {
        return Err(Error::InsufficientOrder { have: inner.len().saturating_sub(1), need: n });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let inner = &inner[..=n];
    let c = inner[0].magnitude();
    if let Some(radius) = outer.radius() {
        if c >= radius {
            return Err(Error::RadiusViolation { stream: outer.name(), constant: c, radius });
        }
    }
    let terms = if inner[0].is_zero() {
        n
    } else {
        let r = c + inner[1..].iter().map(Scalar::magnitude).sum::<f64>();
        (0..=budget)
            .find(|&k| outer.tail_bound(r, k).is_some_and(|b| b < tol))
            .ok_or(Error::NonConvergence { stream: outer.name(), tol, budget })?
    };
    // Horner in the outer coefficients: (((o_K) w + o_{K-1}) w + ...) + o_0
    let mut acc = vec![S::zero(); n + 1];
    for k in (0..=terms).rev() {
        acc = mul_truncated(&acc, inner, n);
        acc[0] = acc[0].clone() + S::from_rational(&outer.coefficient(k));
    }
    Ok(acc)
}
