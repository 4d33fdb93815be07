//! Finite square blocks of infinite matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, ParseError, Result};
use crate::scalar::{Domain, Scalar};

/// Whether a block equals the truncation of the infinite product it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    TruncationApproximate,
}

/// An `n × n` block over a scalar domain. Indexing is 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedMatrix<S> {
    n: usize,
    entries: Vec<S>,
    exactness: Exactness,
}

impl<S: Scalar> TruncatedMatrix<S> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Self { n, entries, exactness: Exactness::Exact }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {n}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect(), exactness: Exactness::Exact })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        S::DOMAIN
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn with_exactness(mut self, exactness: Exactness) -> Self {
        self.exactness = exactness;
        self
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.rows().map(<[S]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].clone()).with_exactness(self.exactness)
    }

    /// Leading `k × k` block.
    pub fn top_left(&self, k: usize) -> Self {
        assert!(k <= self.n, "block {k} exceeds size {}", self.n);
        Self::from_fn(k, |r, c| self[(r, c)].clone()).with_exactness(self.exactness)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedMatrix<T> {
        TruncatedMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
            exactness: self.exactness,
        }
    }

    /// Finite matrix product. The result inherits approximation flags.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "size mismatch in matrix product");
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        if self.exactness != Exactness::Exact || rhs.exactness != Exactness::Exact {
            out.exactness = Exactness::TruncationApproximate;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "size mismatch in matrix difference");
        Self::from_fn(self.n, |r, c| self[(r, c)].clone() - rhs[(r, c)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_lower(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self[(r, c)].is_zero()))
    }

    pub fn is_upper(&self) -> bool {
        (0..self.n).all(|r| (0..r).all(|c| self[(r, c)].is_zero()))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self[(i, i)].is_one())
    }

    /// Largest entrywise magnitude of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "size mismatch in deviation");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    /// `{"n":k,"domain":"rational","rows":[[...],...]}`
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<Value>> =
            self.rows().map(|r| r.iter().map(Scalar::to_json).collect()).collect();
        let mut v = json!({ "n": self.n, "domain": S::DOMAIN.as_str(), "rows": rows });
        if self.exactness != Exactness::Exact {
            v["exactness"] = json!(self.exactness);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::from(ParseError::BadDocument(m.to_string()));
        let domain = v.get("domain").and_then(Value::as_str).unwrap_or("rational");
        let domain = Domain::parse(domain)?;
        if domain != S::DOMAIN {
            return Err(Error::DomainMismatch { expected: S::DOMAIN.as_str(), found: domain.as_str().into() });
        }
        let rows = v.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing rows"))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("row is not an array"))?
                    .iter()
                    .map(|x| S::from_json(x).map_err(Error::from))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Self::from_rows(rows)?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != m.n {
                return Err(bad("declared n disagrees with rows"));
            }
        }
        Ok(m)
    }
}

impl<S> Index<(usize, usize)> for TruncatedMatrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of bounds for size {}", self.n);
        &self.entries[r * self.n + c]
    }
}

impl<S> IndexMut<(usize, usize)> for TruncatedMatrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of bounds for size {}", self.n);
        &mut self.entries[r * self.n + c]
    }
}

/// Right-aligned columns, one row per line.
impl<S: Scalar> fmt::Display for TruncatedMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.rows().map(|r| r.iter().map(Scalar::render).collect()).collect();
        let mut widths = vec![0; self.n];
        for row in &cells {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:>w$}"))
                .collect();
            writeln!(f, "{}", line.join("  "))?;
        }
        Ok(())
    }
}
