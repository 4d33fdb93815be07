//! Scalar domains used by every matrix and series in the crate.
//!
//! Three domains are supported: exact rationals ([`Q`]), complex floating
//! values ([`C64`]) and bivariate polynomials over the rationals
//! ([`BiPoly`](crate::poly::BiPoly)). Algorithms are generic over [`Scalar`];
//! anything that divides asks for [`Field`], and anything whose output contract
//! relies on exact zero tests asks for [`ExactField`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ParseError;

/// Exact rational scalar.
pub type Q = num_rational::BigRational;

/// Complex floating scalar.
pub type C64 = Complex64;

/// Tag naming the scalar domain of a matrix or series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Rational,
    ComplexFloat,
    Bipoly,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Rational => "rational",
            Domain::ComplexFloat => "complex-float",
            Domain::Bipoly => "bipoly",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ParseError> {
        match s {
            "rational" => Ok(Domain::Rational),
            "complex-float" | "complex" => Ok(Domain::ComplexFloat),
            "bipoly" => Ok(Domain::Bipoly),
            other => Err(ParseError::UnknownDomain(other.to_string())),
        }
    }
}

/// A commutative ring with unit that the crate can compute over.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const DOMAIN: Domain;

    /// Image of a rational number under the canonical ring map.
    fn from_rational(q: &Q) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&Q::from_integer(BigInt::from(n)))
    }

    /// A nonnegative size used for tolerances and tail bounds.
    fn magnitude(&self) -> f64;

    /// Human-readable rendering used in aligned text output.
    fn render(&self) -> String;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self, ParseError>;
}

/// Scalars that support division by nonzero elements.
pub trait Field: Scalar + Div<Output = Self> {}

/// Fields whose arithmetic and zero test are exact.
pub trait ExactField: Field {}

impl Scalar for Q {
    const DOMAIN: Domain = Domain::Rational;

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self, ParseError> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Q::from_integer(BigInt::from(n.as_i64().unwrap()))),
            other => Err(ParseError::BadScalar(other.to_string())),
        }
    }
}

impl Field for Q {}
impl ExactField for Q {}

impl Scalar for C64 {
    const DOMAIN: Domain = Domain::ComplexFloat;

    fn from_rational(q: &Q) -> Self {
        C64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{:.6}", self.re)
        } else {
            format!("{:.6}{:+.6}i", self.re, self.im)
        }
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self, ParseError> {
        match v.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(ParseError::BadScalar(v.to_string())),
            },
            _ => Err(ParseError::BadScalar(v.to_string())),
        }
    }
}

impl Field for C64 {}

/// Parses `"n"`, `"n/d"` (any sign placement) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Q, ParseError> {
    let t = s.trim();
    let bad = || ParseError::BadScalar(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Shorthand for `p/q` as an exact rational.
pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Shorthand for an integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Binomial coefficient `C(n, k)` as a big integer; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `x^k` by repeated squaring.
pub fn pow<S: Scalar>(x: &S, mut k: usize) -> S {
    let mut base = x.clone();
    let mut acc = S::one();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        k >>= 1;
        if k > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_is_canonical() {
        assert_eq!(parse_rational("6/-4").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), qi(7));
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn complex_json_is_a_pair() {
        let z = C64::new(0.5, -1.25);
        assert_eq!(C64::from_json(&z.to_json()).unwrap(), z);
        assert!(C64::from_json(&serde_json::json!([1.0])).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = q(-2, 3);
        let mut acc = qi(1);
        for k in 0..9 {
            assert_eq!(pow(&x, k), acc);
            acc = acc * x.clone();
        }
    }
}
