//! The embedding `g ↦ M_g` with `M_g u_x = u_{g(x)}`, translation matrices,
//! the `L₁ U ⋆ L₂` decomposition and structure-aware truncated products.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::handle::{InfiniteMatrixHandle, Structure};
use crate::matrix::{Exactness, TruncatedMatrix};
use crate::scalar::{pow, Scalar};
use crate::series::{pointwise_power, GroupoidElement, InfiniteSeries};

/// `n × n` block of the Carleman matrix: entry `(i, j)` (1-based) is the
/// coefficient of `(x - s(g))^{j-1}` in `g^{i-1}`.
pub fn carleman_embed<S: Scalar>(g: &GroupoidElement<S>, n: usize) -> Result<TruncatedMatrix<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    if g.order() + 1 < n {
        return Err(Error::InsufficientOrder { have: g.order(), need: n - 1 });
    }
    let rows = (0..n)
        .map(|m| pointwise_power(g, m, n - 1))
        .collect::<Result<Vec<_>>>()?;
    TruncatedMatrix::from_rows(rows)
}

/// `n × n` block of `T_a`, the matrix of `z ↦ a + z`.
pub fn translation_matrix<S: Scalar>(a: &S, n: usize) -> TruncatedMatrix<S> {
    InfiniteMatrixHandle::translation(a.clone()).truncation(n)
}

/// Whether the junction between two factors has been carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Junction {
    Performed,
    Latent,
}

/// An ordered list of factors with a flag per adjacent pair.
///
/// A junction may be `Performed` only when the multiplication is a finite sum
/// entrywise: left factor lower triangular or right factor upper triangular.
#[derive(Clone, Debug)]
pub struct LatentProduct<S> {
    factors: Vec<InfiniteMatrixHandle<S>>,
    junctions: Vec<Junction>,
}

impl<S: Scalar> LatentProduct<S> {
    pub fn new(factors: Vec<InfiniteMatrixHandle<S>>, junctions: Vec<Junction>) -> Result<Self> {
        if factors.is_empty() || junctions.len() + 1 != factors.len() {
            return Err(Error::Dimension(format!(
                "{} factors need {} junction flags, got {}",
                factors.len(),
                factors.len().saturating_sub(1),
                junctions.len()
            )));
        }
        for (k, flag) in junctions.iter().enumerate() {
            if *flag == Junction::Performed && !performable(&factors[k], &factors[k + 1]) {
                return Err(Error::JunctionNotPerformable { index: k + 1 });
            }
        }
        Ok(Self { factors, junctions })
    }

    pub fn factors(&self) -> &[InfiniteMatrixHandle<S>] {
        &self.factors
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    /// Carries out every performed junction, leaving only latent ones.
    pub fn collapse(&self) -> Self {
        let mut factors = vec![self.factors[0].clone()];
        let mut junctions = Vec::new();
        for (k, flag) in self.junctions.iter().enumerate() {
            let next = &self.factors[k + 1];
            match flag {
                Junction::Performed => {
                    let last = factors.pop().expect("nonempty");
                    // left-to-right merging keeps a lower left factor lower
                    let merged = InfiniteMatrixHandle::product(&last, next)
                        .expect("performed junctions are validated on construction");
                    factors.push(merged);
                }
                Junction::Latent => {
                    factors.push(next.clone());
                    junctions.push(Junction::Latent);
                }
            }
        }
        Self { factors, junctions }
    }

    /// Factor provenance and junction flags; entries are never materialized.
    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.factors.iter().map(|f| json!({
                "provenance": f.provenance(),
                "structure": f.structure(),
            })).collect::<Vec<_>>(),
            "junctions": self.junctions,
        })
    }
}

fn performable<S: Scalar>(a: &InfiniteMatrixHandle<S>, b: &InfiniteMatrixHandle<S>) -> bool {
    a.structure().is_lower() || b.structure().is_upper()
}

/// `[T_{t(g)}, M_γ, T_{-s(g)}]` with `γ = τ_{-t(g)} ∘ g ∘ τ_{s(g)}` in the
/// isotropy group. The first junction is performed, the second latent.
pub fn lul_decompose<S: Scalar>(g: &InfiniteSeries<S>) -> LatentProduct<S> {
    let left = InfiniteMatrixHandle::translation(g.target());
    let middle = InfiniteMatrixHandle::carleman(&g.isotropy_part());
    let right = InfiniteMatrixHandle::translation(-g.base_point().clone());
    LatentProduct::new(vec![left, middle, right], vec![Junction::Performed, Junction::Latent])
        .expect("translation factors are lower unipotent")
}

/// The `n × n` block of `A·B` computed from the first `n` terms of each entry.
///
/// Entries whose sum is provably finite within the window (left row support
/// or right column support at most `n`) are exact; otherwise the block is
/// flagged [`Exactness::TruncationApproximate`].
pub fn truncated_multiply<S: Scalar>(
    a: &InfiniteMatrixHandle<S>,
    b: &InfiniteMatrixHandle<S>,
    n: usize,
) -> TruncatedMatrix<S> {
    let left = a.window(n, n);
    let right = b.window(n, n);
    let mut exact = true;
    let m = TruncatedMatrix::from_fn(n, |r, c| {
        let finite = a.row_support(r + 1).is_some_and(|k| k <= n)
            || b.col_support(c + 1).is_some_and(|k| k <= n);
        exact &= finite;
        (0..n).fold(S::zero(), |acc, k| acc + left[r][k].clone() * right[k][c].clone())
    });
    m.with_exactness(if exact { Exactness::Exact } else { Exactness::TruncationApproximate })
}

/// The column `u_z = (1, z, z², …, z^{n-1})ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialColumn<S> {
    z: S,
    powers: Vec<S>,
}

impl<S: Scalar> MonomialColumn<S> {
    pub fn new(z: S, n: usize) -> Self {
        let mut powers = Vec::with_capacity(n);
        let mut p = S::one();
        for _ in 0..n {
            powers.push(p.clone());
            p = p * z.clone();
        }
        Self { z, powers }
    }

    pub fn point(&self) -> &S {
        &self.z
    }

    pub fn powers(&self) -> &[S] {
        &self.powers
    }
}

/// Outcome of comparing `M_g u` against the powers of `g(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnCheck {
    /// Deviation in row `i` (compares the power `g(z)^{i-1}`).
    pub per_row: Vec<f64>,
    pub max_deviation: f64,
    pub within_tol: bool,
}

/// Checks `M_g u_{z - s(g)} ≈ u_{g(z)}` on an `n × n` truncation, where `g(z)`
/// is evaluated from the coefficients `g` carries.
///
/// Whether the truncated series is a faithful proxy near `z` is the caller's
/// concern; the deviation is reported, not interpreted.
pub fn monomial_column_check<S: Scalar>(
    g: &GroupoidElement<S>,
    z: &S,
    n: usize,
    tol: f64,
) -> Result<ColumnCheck> {
    let m = carleman_embed(g, n)?;
    let u = MonomialColumn::new(z.clone() - g.base_point().clone(), n);
    let gz = g.eval(z);
    let per_row: Vec<f64> = m
        .rows()
        .enumerate()
        .map(|(i, row)| {
            let lhs = row
                .iter()
                .zip(u.powers())
                .fold(S::zero(), |acc, (a, p)| acc + a.clone() * p.clone());
            (lhs - pow(&gz, i)).magnitude()
        })
        .collect();
    let max_deviation = per_row.iter().copied().fold(0.0, f64::max);
    Ok(ColumnCheck { per_row, max_deviation, within_tol: max_deviation <= tol })
}

/// `true` when the handle's tag is consistent with its entries on an `n × n`
/// window. Tags can only be refuted, never proven, from finite data.
pub fn structure_consistent<S: Scalar>(h: &InfiniteMatrixHandle<S>, n: usize) -> bool {
    let w = h.window(n, n);
    let s = h.structure();
    (0..n).all(|r| {
        (0..n).all(|c| {
            let x = &w[r][c];
            let zero_required = s.is_lower() && c > r || s.is_upper() && r > c;
            let one_required = s == Structure::LowerUnipotent && r == c;
            (!zero_required || x.is_zero()) && (!one_required || x.is_one())
        })
    })
}
