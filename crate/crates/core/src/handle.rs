//! Lazily generated infinite matrices indexed by ℕ × ℕ from the upper-left
//! corner.
//!
//! A handle couples an entry oracle with a structure tag and a provenance
//! record. Structure tags and support bounds are what make a product
//! truncation-exact; provenance is what certifies kernel vectors.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::TruncatedMatrix;
use crate::scalar::{binomial, pow, Scalar, Q};
use crate::series::{mul_truncated, InfiniteSeries};

/// Triangularity known for the whole infinite matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    LowerUnipotent,
    Lower,
    Upper,
    Diagonal,
    General,
}

impl Structure {
    pub fn is_lower(self) -> bool {
        matches!(self, Structure::LowerUnipotent | Structure::Lower | Structure::Diagonal)
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Structure::Upper | Structure::Diagonal)
    }

    fn of_block<S: Scalar>(m: &TruncatedMatrix<S>) -> Self {
        match (m.is_lower(), m.is_upper()) {
            (true, true) => Structure::Diagonal,
            (true, false) if m.has_unit_diagonal() => Structure::LowerUnipotent,
            (true, false) => Structure::Lower,
            (false, true) => Structure::Upper,
            (false, false) => Structure::General,
        }
    }
}

/// Where a handle came from. Serialized in place of materialized entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Identity,
    CarlemanOf { series: String },
    Translation { shift: String },
    Explicit { n: usize },
    AdjointM { t: String },
    Product { factors: Vec<Provenance> },
    Custom { label: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity => write!(f, "I"),
            Provenance::CarlemanOf { series } => write!(f, "M[{series}]"),
            Provenance::Translation { shift } => write!(f, "T[{shift}]"),
            Provenance::Explicit { n } => write!(f, "explicit({n}x{n})"),
            Provenance::AdjointM { t } => write!(f, "M_t[t={t}]"),
            Provenance::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" * "))
            }
            Provenance::Custom { label } => write!(f, "{label}"),
        }
    }
}

/// Entry generator behind a handle. Indices are 1-based.
///
/// The support and zero-line hooks must be sound: returning `Some(k)` from
/// `row_support(i)` promises `entry(i, j) == 0` for every `j > k`.
pub trait EntryOracle<S>: Send + Sync {
    fn entry(&self, i: usize, j: usize) -> S;

    fn row_support(&self, _i: usize) -> Option<usize> {
        None
    }

    fn col_support(&self, _j: usize) -> Option<usize> {
        None
    }

    /// `true` only when column `j` is provably zero in every row.
    fn column_is_zero(&self, _j: usize) -> bool {
        false
    }

    /// `true` only when row `i` is provably zero in every column.
    fn row_is_zero(&self, _i: usize) -> bool {
        false
    }
}

/// Shared, cheaply clonable infinite matrix.
#[derive(Clone)]
pub struct InfiniteMatrixHandle<S> {
    oracle: Arc<dyn EntryOracle<S>>,
    structure: Structure,
    provenance: Provenance,
}

impl<S: Scalar> InfiniteMatrixHandle<S> {
    pub fn new(oracle: Arc<dyn EntryOracle<S>>, structure: Structure, provenance: Provenance) -> Self {
        Self { oracle, structure, provenance }
    }

    pub fn identity() -> Self {
        Self::new(Arc::new(IdentityOracle), Structure::Diagonal, Provenance::Identity)
    }

    /// Handle for `M_g`: row `i` lists the coefficients of `g^{i-1}`.
    pub fn carleman(g: &InfiniteSeries<S>) -> Self {
        let a1 = g.coefficient(1);
        let structure = match (g.target().is_zero(), g.degree()) {
            (true, Some(1)) => Structure::Diagonal,
            (true, _) => Structure::Upper,
            (false, Some(1)) if a1.is_one() => Structure::LowerUnipotent,
            (false, Some(1)) => Structure::Lower,
            (false, _) => Structure::General,
        };
        let provenance = Provenance::CarlemanOf { series: g.name().to_string() };
        Self::new(Arc::new(CarlemanOracle::new(g.clone())), structure, provenance)
    }

    /// `T_a`, entry `(i, j) = C(i-1, j-1) a^{i-j}`.
    pub fn translation(a: S) -> Self {
        let provenance = Provenance::Translation { shift: a.render() };
        let structure = if a.is_zero() { Structure::Diagonal } else { Structure::LowerUnipotent };
        Self::new(Arc::new(TranslationOracle { a }), structure, provenance)
    }

    /// Block `m` in the upper-left corner, zero elsewhere.
    pub fn explicit(m: TruncatedMatrix<S>) -> Self {
        let structure = Structure::of_block(&m);
        let provenance = Provenance::Explicit { n: m.size() };
        Self::new(Arc::new(ExplicitOracle { m }), structure, provenance)
    }

    pub fn from_fn(
        structure: Structure,
        label: impl Into<String>,
        f: impl Fn(usize, usize) -> S + Send + Sync + 'static,
    ) -> Self {
        Self::new(Arc::new(FnOracle(f)), structure, Provenance::Custom { label: label.into() })
    }

    /// Performed product `A·B`; only allowed when every entry is a finite sum.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        if !(a.structure.is_lower() || b.structure.is_upper()) {
            return Err(Error::JunctionNotPerformable { index: 1 });
        }
        let structure = match (a.structure, b.structure) {
            (Structure::Diagonal, s) | (s, Structure::Diagonal) => s,
            (Structure::LowerUnipotent, Structure::LowerUnipotent) => Structure::LowerUnipotent,
            (x, y) if x.is_lower() && y.is_lower() => Structure::Lower,
            (x, y) if x.is_upper() && y.is_upper() => Structure::Upper,
            _ => Structure::General,
        };
        let provenance = Provenance::Product {
            factors: [&a.provenance, &b.provenance]
                .into_iter()
                .flat_map(|p| match p {
                    Provenance::Product { factors } => factors.clone(),
                    other => vec![other.clone()],
                })
                .collect(),
        };
        Ok(Self::new(Arc::new(ProductOracle { a: a.clone(), b: b.clone() }), structure, provenance))
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        assert!(i >= 1 && j >= 1, "handle indices are 1-based, got ({i}, {j})");
        self.oracle.entry(i, j)
    }

    /// Last column that can hold a nonzero entry in row `i`, if finite.
    pub fn row_support(&self, i: usize) -> Option<usize> {
        let tag = self.structure.is_lower().then_some(i);
        min_opt(tag, self.oracle.row_support(i))
    }

    /// Last row that can hold a nonzero entry in column `j`, if finite.
    pub fn col_support(&self, j: usize) -> Option<usize> {
        let tag = self.structure.is_upper().then_some(j);
        min_opt(tag, self.oracle.col_support(j))
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        self.oracle.column_is_zero(j) || self.oracle.col_support(j) == Some(0)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.oracle.row_is_zero(i) || self.oracle.row_support(i) == Some(0)
    }

    /// Rows `1..=rows`, columns `1..=cols`, as 0-based nested vectors.
    pub fn window(&self, rows: usize, cols: usize) -> Vec<Vec<S>> {
        (1..=rows).map(|i| (1..=cols).map(|j| self.entry(i, j)).collect()).collect()
    }

    pub fn truncation(&self, n: usize) -> TruncatedMatrix<S> {
        TruncatedMatrix::from_fn(n, |r, c| self.entry(r + 1, c + 1))
    }
}

impl<S> fmt::Debug for InfiniteMatrixHandle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfiniteMatrixHandle")
            .field("structure", &self.structure)
            .field("provenance", &self.provenance)
            .finish()
    }
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

struct IdentityOracle;

impl<S: Scalar> EntryOracle<S> for IdentityOracle {
    fn entry(&self, i: usize, j: usize) -> S {
        if i == j {
            S::one()
        } else {
            S::zero()
        }
    }

    fn row_support(&self, i: usize) -> Option<usize> {
        Some(i)
    }

    fn col_support(&self, j: usize) -> Option<usize> {
        Some(j)
    }
}

struct FnOracle<F>(F);

impl<S, F: Fn(usize, usize) -> S + Send + Sync> EntryOracle<S> for FnOracle<F> {
    fn entry(&self, i: usize, j: usize) -> S {
        (self.0)(i, j)
    }
}

struct TranslationOracle<S> {
    a: S,
}

impl<S: Scalar> EntryOracle<S> for TranslationOracle<S> {
    fn entry(&self, i: usize, j: usize) -> S {
        if j > i {
            return S::zero();
        }
        let c = S::from_rational(&Q::from_integer(binomial(i - 1, j - 1)));
        c * pow(&self.a, i - j)
    }

    fn row_support(&self, i: usize) -> Option<usize> {
        Some(i)
    }
}

struct ExplicitOracle<S> {
    m: TruncatedMatrix<S>,
}

impl<S: Scalar> EntryOracle<S> for ExplicitOracle<S> {
    fn entry(&self, i: usize, j: usize) -> S {
        let n = self.m.size();
        if i > n || j > n {
            S::zero()
        } else {
            self.m[(i - 1, j - 1)].clone()
        }
    }

    fn row_support(&self, i: usize) -> Option<usize> {
        if i > self.m.size() {
            return Some(0);
        }
        Some(self.m.row(i - 1).iter().rposition(|x| !x.is_zero()).map_or(0, |p| p + 1))
    }

    fn col_support(&self, j: usize) -> Option<usize> {
        let n = self.m.size();
        if j > n {
            return Some(0);
        }
        Some((0..n).rev().find(|&r| !self.m[(r, j - 1)].is_zero()).map_or(0, |r| r + 1))
    }
}

/// Memoized Carleman rows. Rows are recomputed at double width whenever a
/// query reaches past the cached columns.
struct CarlemanOracle<S> {
    series: InfiniteSeries<S>,
    cache: Mutex<CarlemanCache<S>>,
}

struct CarlemanCache<S> {
    width: usize,
    coeffs: Vec<S>,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> CarlemanOracle<S> {
    fn new(series: InfiniteSeries<S>) -> Self {
        Self { series, cache: Mutex::new(CarlemanCache { width: 0, coeffs: Vec::new(), rows: Vec::new() }) }
    }
}

impl<S: Scalar> EntryOracle<S> for CarlemanOracle<S> {
    fn entry(&self, i: usize, j: usize) -> S {
        let mut cache = self.cache.lock().unwrap_or_else(|p| p.into_inner());
        if j > cache.width {
            let width = j.max(2 * cache.width).max(8);
            cache.coeffs = (0..width).map(|k| self.series.coefficient(k)).collect();
            cache.rows.clear();
            cache.width = width;
        }
        let width = cache.width;
        while cache.rows.len() < i {
            let next = match cache.rows.last() {
                None => {
                    let mut one = vec![S::zero(); width];
                    one[0] = S::one();
                    one
                }
                Some(prev) => mul_truncated(prev, &cache.coeffs, width - 1),
            };
            cache.rows.push(next);
        }
        cache.rows[i - 1][j - 1].clone()
    }

    fn row_support(&self, i: usize) -> Option<usize> {
        self.series.degree().map(|d| (i - 1) * d + 1)
    }
}

struct ProductOracle<S> {
    a: InfiniteMatrixHandle<S>,
    b: InfiniteMatrixHandle<S>,
}

impl<S: Scalar> EntryOracle<S> for ProductOracle<S> {
    fn entry(&self, i: usize, j: usize) -> S {
        let bound = min_opt(self.a.row_support(i), self.b.col_support(j))
            .expect("performed product must have finite entry sums");
        (1..=bound).fold(S::zero(), |acc, k| acc + self.a.entry(i, k) * self.b.entry(k, j))
    }
}
