//! Sparse multivariate polynomials over the rationals.
//!
//! [`BiPoly`] (two variables `t`, `t'`) is the scalar domain of the adjoint
//! scenario; the three-variable instance is used to check associativity of the
//! deformed group law.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::ParseError;
use crate::scalar::{parse_rational, Domain, Scalar, Q};

const VAR_NAMES: [&str; 4] = ["t", "t'", "t''", "t'''"];

/// Polynomial in `V` commuting variables with rational coefficients.
///
/// Only nonzero coefficients are stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly<const V: usize> {
    terms: BTreeMap<[u32; V], Q>,
}

/// Polynomial in `t` and `t'`.
pub type BiPoly = MultiPoly<2>;

/// Polynomial in `t`, `t'` and `t''`.
pub type TriPoly = MultiPoly<3>;

impl<const V: usize> MultiPoly<V> {
    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; V], c);
        }
        Self { terms }
    }

    /// The `i`-th variable (0-based).
    pub fn var(i: usize) -> Self {
        assert!(i < V, "variable index {i} out of range for {V} variables");
        let mut e = [0; V];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: [u32; V], c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; V], &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: [u32; V]) -> Q {
        self.terms.get(&exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    fn add_term(&mut self, exps: [u32; V], c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn eval(&self, point: &[Q; V]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitutes polynomials in `W` variables for each of the `V` variables.
    pub fn compose<const W: usize>(&self, args: &[MultiPoly<W>; V]) -> MultiPoly<W> {
        let mut acc = MultiPoly::<W>::zero();
        for (e, c) in &self.terms {
            let mut m = MultiPoly::<W>::constant(c.clone());
            for (arg, &k) in args.iter().zip(e) {
                for _ in 0..k {
                    m = m * arg.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }
}

impl<const V: usize> Zero for MultiPoly<V> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<const V: usize> One for MultiPoly<V> {
    fn one() -> Self {
        Self::constant(Q::one())
    }
}

impl<const V: usize> Add for MultiPoly<V> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<const V: usize> Sub for MultiPoly<V> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const V: usize> Neg for MultiPoly<V> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<const V: usize> Mul for MultiPoly<V> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0; V];
                for k in 0..V {
                    e[k] = ea[k] + eb[k];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl<const V: usize> fmt::Display for MultiPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = VAR_NAMES.get(i).copied().unwrap_or("x");
                    if k == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Scalar for BiPoly {
    const DOMAIN: Domain = Domain::Bipoly;

    fn from_rational(q: &Q) -> Self {
        Self::constant(q.clone())
    }

    fn magnitude(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .values()
            .map(|c| c.to_f64().map_or(f64::INFINITY, f64::abs))
            .sum()
    }

    fn render(&self) -> String {
        self.to_string()
    }

    /// `[[deg_t, deg_t', "coef"], ...]`
    fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!([e[0], e[1], c.to_string()]))
                .collect(),
        )
    }

    fn from_json(v: &Value) -> Result<Self, ParseError> {
        let bad = || ParseError::BadScalar(v.to_string());
        let mut out = Self::zero();
        for term in v.as_array().ok_or_else(bad)? {
            match term.as_array().map(|a| a.as_slice()) {
                Some([a, b, Value::String(c)]) => {
                    let a = a.as_u64().ok_or_else(bad)? as u32;
                    let b = b.as_u64().ok_or_else(bad)? as u32;
                    out.add_term([a, b], parse_rational(c)?);
                }
                _ => return Err(bad()),
            }
        }
        Ok(out)
    }
}
