//! Two worked matrix scenarios.
//!
//! The circle action conjugates `iy` by the exponential chart and lands on
//! the scaling `z ↦ z e^{iy}`, whose matrix is `diag(1, e^{iy}, e^{2iy}, …)`.
//! The adjoint family conjugates `exp(tX)` by an upper triangular `g` and
//! turns addition of parameters into `μ(t, t') = t + t' − t t'`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::carleman::{carleman_embed, truncated_multiply};
use crate::error::{Error, Result};
use crate::handle::{EntryOracle, InfiniteMatrixHandle, Provenance, Structure};
use crate::matrix::TruncatedMatrix;
use crate::poly::{BiPoly, MultiPoly, TriPoly};
use crate::scalar::{binomial, Scalar, C64, Q};
use crate::series::{substitute_analytic, AnalyticStream, Builtin, GroupoidElement, InfiniteSeries, DEFAULT_TERM_BUDGET};

/// Half-width of the arc of `y` on which the chart composition is certified.
pub const CERTIFIED_HALF_ARC: f64 = PI / 3.0;

/// `diag(1, e^{iθ}, e^{2iθ}, …)` of size `n`.
pub fn rotation_diagonal(theta: f64, n: usize) -> TruncatedMatrix<C64> {
    TruncatedMatrix::from_fn(n, |r, c| if r == c { C64::from_polar(1.0, theta * r as f64) } else { C64::zero() })
}

#[derive(Clone, Debug)]
pub struct CircleReport {
    pub y: f64,
    /// Coefficients of `exp(iy + ln(1+z)) − 1` about 0, through order `n`.
    pub composite: Vec<C64>,
    /// The conjugated series `1 + composite(x − 1)`, re-expanded about 0.
    pub scaling: Vec<C64>,
    /// Carleman matrix of `scaling`.
    pub certified: TruncatedMatrix<C64>,
    /// `T₁ · EXP₀ · (T_{iy} · LN) · T₋₁` from `n × n` truncations.
    pub raw_product: TruncatedMatrix<C64>,
    /// Distance of `certified` from the rotation diagonal.
    pub max_deviation: f64,
    /// Distance of `raw_product` from the rotation diagonal.
    pub raw_deviation: f64,
    pub tol: f64,
}

impl CircleReport {
    pub fn within_tol(&self) -> bool {
        self.max_deviation <= self.tol
    }

    pub fn to_json(&self) -> Value {
        let cs = |v: &[C64]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        json!({
            "y": self.y,
            "composite": cs(&self.composite),
            "scaling": cs(&self.scaling),
            "certified": self.certified.to_json(),
            "max_deviation": self.max_deviation,
            "within_tol": self.within_tol(),
            "raw_product": self.raw_product.to_json(),
            "raw_deviation": self.raw_deviation,
        })
    }
}

/// Matrix of the rotation by `y`, computed through the exponential chart.
///
/// The certified route substitutes `iy + ln(1+z)` into the exponential at
/// the series level, conjugates by the translations and embeds. The raw
/// route multiplies truncated matrices and is kept for comparison only.
pub fn circle_generator_matrix(y: f64, n: usize, tol: f64) -> Result<CircleReport> {
    if !(y.abs() < CERTIFIED_HALF_ARC) {
        return Err(Error::OutsideCertifiedArc { y });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    let iy = C64::new(0.0, y);
    let inner: Vec<C64> =
        (0..=n).map(|k| if k == 0 { iy } else { C64::from_rational(&Builtin::Ln1p.coefficient(k)) }).collect();
    let mut composite = substitute_analytic(AnalyticStream::Exp, &inner, n, tol, DEFAULT_TERM_BUDGET)?;
    composite[0] -= C64::one();

    // 1 + Σ c_k (x − 1)^k = Σ_m x^m Σ_{k≥m} c_k C(k,m) (−1)^{k−m}
    let mut scaling: Vec<C64> = (0..=n)
        .map(|m| {
            (m..=n).fold(C64::zero(), |acc, k| {
                let sign = if (k - m) % 2 == 0 { 1.0 } else { -1.0 };
                let b = C64::from_rational(&Q::from_integer(binomial(k, m)));
                acc + composite[k] * b * sign
            })
        })
        .collect();
    scaling[0] += C64::one();
    let certified = carleman_embed(&GroupoidElement::new(C64::zero(), scaling.clone())?, n)?;

    let raw_product = circle_raw_product(iy, n);
    let target = rotation_diagonal(y, n);
    Ok(CircleReport {
        y,
        max_deviation: certified.max_deviation(&target),
        raw_deviation: raw_product.max_deviation(&target),
        composite,
        scaling,
        certified,
        raw_product,
        tol,
    })
}

fn circle_raw_product(iy: C64, n: usize) -> TruncatedMatrix<C64> {
    let carleman = |b: Builtin| InfiniteMatrixHandle::<C64>::carleman(&InfiniteSeries::builtin(&b));
    let shifted_ln = InfiniteMatrixHandle::product(&InfiniteMatrixHandle::translation(iy), &carleman(Builtin::Ln1p))
        .expect("lower left factor");
    let middle = truncated_multiply(&carleman(Builtin::Expm1), &shifted_ln, n);
    let t_plus = InfiniteMatrixHandle::translation(C64::one()).truncation(n);
    let t_minus = InfiniteMatrixHandle::translation(-C64::one()).truncation(n);
    t_plus.mul(&middle).mul(&t_minus)
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub steps: Vec<f64>,
    pub total_angle: f64,
    pub matrix: TruncatedMatrix<C64>,
    pub max_deviation: f64,
}

/// Product of the certified rotation matrices for each step of `arc`.
pub fn circle_cover_extend(arc: &[f64], n: usize, tol: f64) -> Result<CoverReport> {
    let mut matrix = TruncatedMatrix::identity(n);
    for &y in arc {
        matrix = matrix.mul(&circle_generator_matrix(y, n, tol)?.certified);
    }
    let total_angle: f64 = arc.iter().sum();
    let max_deviation = matrix.max_deviation(&rotation_diagonal(total_angle, n));
    Ok(CoverReport { steps: arc.to_vec(), total_angle, matrix, max_deviation })
}

/// `μ(t, t') = t + t' − t t'`.
pub fn mu(t: &Q, t2: &Q) -> Q {
    t.clone() + t2.clone() - t.clone() * t2.clone()
}

fn mu_poly<const V: usize>(a: &MultiPoly<V>, b: &MultiPoly<V>) -> MultiPoly<V> {
    a.clone() + b.clone() - a.clone() * b.clone()
}

/// `μ(μ(t,t'),t'') − μ(t,μ(t',t''))` as a polynomial in three variables.
pub fn mu_associativity_residual() -> TriPoly {
    let (t, t1, t2) = (TriPoly::var(0), TriPoly::var(1), TriPoly::var(2));
    mu_poly(&mu_poly(&t, &t1), &t2) - mu_poly(&t, &mu_poly(&t1, &t2))
}

fn sign(k: usize) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `exp(A) = Σ A^k / k!`, stopping at the first vanishing power or after
/// `size` terms.
pub fn truncated_exp<S: Scalar>(a: &TruncatedMatrix<S>) -> (TruncatedMatrix<S>, bool) {
    let n = a.size();
    let mut sum = TruncatedMatrix::identity(n);
    let mut power = TruncatedMatrix::identity(n);
    let mut factorial = Q::one();
    for k in 1..=n.max(1) {
        power = power.mul(a);
        if power.is_zero() {
            return (sum, true);
        }
        factorial = factorial * Q::from_integer(k.into());
        let inv = S::from_rational(&(Q::one() / factorial.clone()));
        sum = TruncatedMatrix::from_fn(n, |r, c| sum[(r, c)].clone() + power[(r, c)].clone() * inv.clone());
    }
    (sum, false)
}

/// The adjoint-deformed one-parameter group on an `n × n` truncation, with
/// entries polynomial in `t` (the first variable of [`BiPoly`]).
#[derive(Clone, Debug)]
pub struct AdjointFamily {
    pub n: usize,
    /// Generator: nonzero only in column 1, below the diagonal, `(0, −1, 1, −1, …)`.
    pub x: TruncatedMatrix<BiPoly>,
    /// `exp(tX)`.
    pub u: TruncatedMatrix<BiPoly>,
    /// Upper triangular, `g(i,j) = (−1)^{j−i}`.
    pub g: TruncatedMatrix<BiPoly>,
    /// Upper bidiagonal with ones.
    pub g_inv: TruncatedMatrix<BiPoly>,
    /// `g⁻¹ u g`.
    pub m: TruncatedMatrix<BiPoly>,
    pub x_squared_zero: bool,
    /// Whether the exponential series terminated on a zero power.
    pub exp_terminated: bool,
}

pub fn adjoint_family(n: usize) -> Result<AdjointFamily> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("adjoint family needs n >= 2, got {n}")));
    }
    // one extra row so that g⁻¹ u is exact on the leading block
    let w = n + 1;
    let c = |q: Q| BiPoly::constant(q);
    let x = TruncatedMatrix::from_fn(w, |r, col| if col == 0 && r >= 1 { c(sign(r)) } else { BiPoly::zero() });
    let t = BiPoly::var(0);
    let tx = x.map(|e| e.clone() * t.clone());
    let (u, exp_terminated) = truncated_exp(&tx);
    let g = TruncatedMatrix::from_fn(w, |r, col| if col >= r { c(sign(col - r)) } else { BiPoly::zero() });
    let g_inv = TruncatedMatrix::from_fn(w, |r, col| if col == r || col == r + 1 { BiPoly::one() } else { BiPoly::zero() });
    let m = g_inv.mul(&u).mul(&g);
    let x_squared_zero = x.mul(&x).is_zero();
    Ok(AdjointFamily {
        n,
        x: x.top_left(n),
        u: u.top_left(n),
        g: g.top_left(n),
        g_inv: g_inv.top_left(n),
        m: m.top_left(n),
        x_squared_zero,
        exp_terminated,
    })
}

impl AdjointFamily {
    /// `M_t` with `t` replaced by `p`.
    pub fn m_at(&self, p: &BiPoly) -> TruncatedMatrix<BiPoly> {
        let args = [p.clone(), BiPoly::var(1)];
        self.m.map(|e| e.compose(&args))
    }

    pub fn m_rational(&self, t: &Q) -> TruncatedMatrix<Q> {
        self.m.map(|e| e.eval(&[t.clone(), Q::zero()]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuCheck {
    pub n: usize,
    pub holds: bool,
    /// First nonzero entry of `M_t M_{t'} − M_{μ(t,t')}` (1-based), if any.
    pub failing_entry: Option<(usize, usize)>,
    pub residual: BiPoly,
}

impl MuCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "holds": self.holds,
            "failing_entry": self.failing_entry.map(|(i, j)| [i, j]),
            "residual": self.residual.to_string(),
        })
    }
}

/// Checks `M_t · M_{t'} = M_{μ(t,t')}` entrywise as polynomials.
pub fn adjoint_mu_check(n: usize) -> Result<MuCheck> {
    let fam = adjoint_family(n)?;
    let (t, t1) = (BiPoly::var(0), BiPoly::var(1));
    let lhs = fam.m.mul(&fam.m_at(&t1));
    let rhs = fam.m_at(&mu_poly(&t, &t1));
    let diff = lhs.sub(&rhs);
    let failing = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).find(|&(r, c)| !diff[(r, c)].is_zero());
    Ok(MuCheck {
        n,
        holds: failing.is_none(),
        failing_entry: failing.map(|(r, c)| (r + 1, c + 1)),
        residual: failing.map_or_else(BiPoly::zero, |(r, c)| diff[(r, c)].clone()),
    })
}

/// `M_t` for a rational `t` as an infinite matrix, evaluated entrywise from
/// the factors `g⁻¹`, `exp(tX)` and `g`.
pub fn adjoint_handle(t: Q) -> InfiniteMatrixHandle<Q> {
    let provenance = Provenance::AdjointM { t: t.to_string() };
    InfiniteMatrixHandle::new(Arc::new(AdjointOracle { t }), Structure::Upper, provenance)
}

struct AdjointOracle {
    t: Q,
}

impl AdjointOracle {
    fn u(&self, k: usize, l: usize) -> Q {
        if k == l {
            Q::one()
        } else if l == 1 && k >= 2 {
            self.t.clone() * sign(k - 1)
        } else {
            Q::zero()
        }
    }

    fn g(l: usize, j: usize) -> Q {
        if j >= l {
            sign(j - l)
        } else {
            Q::zero()
        }
    }
}

impl EntryOracle<Q> for AdjointOracle {
    fn entry(&self, i: usize, j: usize) -> Q {
        // g⁻¹ has ones at (i, i) and (i, i+1); g is upper
        [i, i + 1]
            .into_iter()
            .flat_map(|k| (1..=j).map(move |l| (k, l)))
            .fold(Q::zero(), |acc, (k, l)| acc + self.u(k, l) * Self::g(l, j))
    }

    fn row_support(&self, i: usize) -> Option<usize> {
        (i >= 2 || self.t.is_zero()).then_some(i)
    }

    fn col_support(&self, j: usize) -> Option<usize> {
        Some(if j == 1 && self.t.is_one() { 0 } else { j })
    }

    fn column_is_zero(&self, j: usize) -> bool {
        j == 1 && self.t.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Exactness;
    use crate::matrixcore::{gamma_probe, GammaVerdict};
    use crate::scalar::{q, qi};

    fn t() -> BiPoly {
        BiPoly::var(0)
    }

    fn k(q: Q) -> BiPoly {
        BiPoly::constant(q)
    }

    #[test]
    fn adjoint_first_row_and_identity_below() {
        let fam = adjoint_family(6).unwrap();
        let one = BiPoly::one();
        let expected_row: Vec<BiPoly> = (0..6)
            .map(|c| if c == 0 { one.clone() - t() } else { t() * k(sign(c + 1)) })
            .collect();
        assert_eq!(fam.m.row(0), expected_row.as_slice());
        for r in 1..6 {
            for c in 0..6 {
                let want = if r == c { BiPoly::one() } else { BiPoly::zero() };
                assert_eq!(fam.m[(r, c)], want, "entry ({r},{c})");
            }
        }
        assert!(fam.x_squared_zero && fam.exp_terminated);
        let linear = TruncatedMatrix::from_fn(6, |r, c| {
            let id = if r == c { BiPoly::one() } else { BiPoly::zero() };
            id + fam.x[(r, c)].clone() * t()
        });
        assert_eq!(fam.u, linear);
        assert_eq!(fam.g_inv.mul(&fam.g), TruncatedMatrix::identity(6));
        assert_eq!(fam.m_rational(&qi(0)), TruncatedMatrix::identity(6));
    }

    #[test]
    fn mu_identity_holds() {
        let check = adjoint_mu_check(8).unwrap();
        assert!(check.holds, "{check:?}");
        assert!(check.residual.is_zero());
        let fam = adjoint_family(3).unwrap();
        let t1 = BiPoly::var(1);
        let product = fam.m.mul(&fam.m_at(&t1));
        let one = BiPoly::one();
        assert_eq!(product[(0, 0)], (one.clone() - t()) * (one - t1));
        assert!(mu_associativity_residual().is_zero());
    }

    #[test]
    fn mu_closure_on_samples() {
        let samples = [q(1, 2), qi(-3), q(7, 5), qi(2), q(-1, 9), qi(0)];
        for a in &samples {
            for b in &samples {
                assert_ne!(mu(a, b), qi(1));
            }
            assert_eq!(mu(a, &qi(1)), qi(1));
        }
    }

    #[test]
    fn handle_matches_polynomial_family() {
        let fam = adjoint_family(7).unwrap();
        for tv in [q(1, 3), qi(-2), qi(1)] {
            assert_eq!(adjoint_handle(tv.clone()).truncation(7), fam.m_rational(&tv));
        }
    }

    #[test]
    fn gamma_probe_on_adjoint() {
        let v = gamma_probe(&adjoint_handle(qi(1)), 6, 12).unwrap();
        assert_eq!(v.to_json()["certificate"], "zero-column");
        assert_eq!(v.to_json()["vector"], json!({"1": "1"}));
        for tv in [q(1, 2), qi(2), qi(-5)] {
            let v = gamma_probe(&adjoint_handle(tv), 6, 12).unwrap();
            assert!(matches!(v, GammaVerdict::NoObstruction { .. }), "{v:?}");
        }
    }

    #[test]
    fn circle_identity_at_zero() {
        let r = circle_generator_matrix(0.0, 6, 1e-12).unwrap();
        assert!(r.max_deviation < 1e-12);
    }

    #[test]
    fn circle_composite_collapses() {
        let y = 0.5;
        let r = circle_generator_matrix(y, 8, 1e-9).unwrap();
        let e = C64::from_polar(1.0, y);
        assert!((r.composite[0] - (e - 1.0)).norm() < 1e-9);
        assert!((r.composite[1] - e).norm() < 1e-9);
        assert!(r.composite[2..].iter().all(|c| c.norm() < 1e-9));
        assert!(r.within_tol(), "{}", r.max_deviation);
        assert_eq!(r.raw_product.exactness(), Exactness::TruncationApproximate);
        assert_eq!(r.certified.exactness(), Exactness::Exact);
    }

    #[test]
    fn circle_rejects_outside_arc() {
        assert_eq!(circle_generator_matrix(1.2, 4, 1e-9).unwrap_err(), Error::OutsideCertifiedArc { y: 1.2 });
        assert!(circle_generator_matrix(-PI / 3.0, 4, 1e-9).is_err());
    }

    #[test]
    fn cover_extension() {
        let r = circle_cover_extend(&[0.4, -0.4], 6, 1e-10).unwrap();
        assert!(r.max_deviation < 2e-10);
        let r = circle_cover_extend(&[0.8; 8], 6, 1e-10).unwrap();
        assert!((r.total_angle - 6.4).abs() < 1e-12 && r.total_angle > 2.0 * PI);
        assert!(r.max_deviation < 8e-10);
    }
}
