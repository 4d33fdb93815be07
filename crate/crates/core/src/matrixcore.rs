//! Exact linear algebra on truncations of infinite matrices.
//!
//! Pivoting is always minimal-row-index: for each column, the first unused row
//! whose reduced entry is nonzero. This makes permutations canonical and
//! nested truncations consistent whenever the leading minors do not vanish.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::handle::InfiniteMatrixHandle;
use crate::matrix::TruncatedMatrix;
use crate::scalar::{ExactField, Scalar};

/// A permutation of ℕ given by a finite prefix; positions past the prefix take
/// the unused indices in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PermutationSpec {
    prefix: Vec<usize>,
}

impl PermutationSpec {
    pub fn new(prefix: Vec<usize>) -> Result<Self> {
        if prefix.contains(&0) {
            return Err(Error::InvalidPermutation("indices are 1-based".into()));
        }
        let mut seen = prefix.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPermutation(format!("repeated entry in {prefix:?}")));
        }
        Ok(Self { prefix })
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    /// Image of position `k` (1-based).
    pub fn apply(&self, k: usize) -> usize {
        assert!(k >= 1, "positions are 1-based");
        if k <= self.prefix.len() {
            return self.prefix[k - 1];
        }
        let mut remaining = k - self.prefix.len();
        let mut c = 0;
        loop {
            c += 1;
            if !self.prefix.contains(&c) {
                remaining -= 1;
                if remaining == 0 {
                    return c;
                }
            }
        }
    }

    pub fn first(&self, n: usize) -> Vec<usize> {
        (1..=n).map(|k| self.apply(k)).collect()
    }

    pub fn is_identity_on(&self, n: usize) -> bool {
        (1..=n).all(|k| self.apply(k) == k)
    }

    /// The `n × n` permutation matrix with a 1 at `(π(k), k)`; requires `π` to
    /// map `{1..n}` onto itself.
    pub fn matrix<S: Scalar>(&self, n: usize) -> Result<TruncatedMatrix<S>> {
        let image = self.first(n);
        if image.iter().any(|&r| r > n) {
            return Err(Error::InvalidPermutation(format!("{image:?} leaves 1..={n}")));
        }
        let mut p = TruncatedMatrix::zeros(n);
        for (k, &r) in image.iter().enumerate() {
            p[(r - 1, k)] = S::one();
        }
        Ok(p)
    }
}

/// Strictly increasing `β: ℕ ↪ ℕ`, given by a prefix and continued with
/// step 1 after it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BlockInjection {
    values: Vec<usize>,
}

impl BlockInjection {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        if !increasing || values.first() == Some(&0) {
            return Err(Error::InvalidInjection);
        }
        Ok(Self { values })
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn apply(&self, k: usize) -> usize {
        match self.values.last() {
            _ if k <= self.values.len() => self.values[k - 1],
            Some(&last) => last + (k - self.values.len()),
            None => k,
        }
    }
}

/// A column vector with finitely many nonzero entries, keyed 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSupportVector<S> {
    entries: BTreeMap<usize, S>,
}

impl<S: Scalar> FiniteSupportVector<S> {
    pub fn from_dense(v: &[S]) -> Self {
        let entries = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i + 1, x.clone()))
            .collect();
        Self { entries }
    }

    pub fn unit(i: usize) -> Self {
        Self { entries: BTreeMap::from([(i, S::one())]) }
    }

    pub fn get(&self, i: usize) -> S {
        self.entries.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self, n: usize) -> Vec<S> {
        (1..=n).map(|i| self.get(i)).collect()
    }

    /// `{"1":"1","3":"-1/2"}`
    pub fn to_json(&self) -> Value {
        Value::Object(self.entries.iter().map(|(i, x)| (i.to_string(), x.to_json())).collect())
    }
}

/// Row-reduction record shared by PLU, pivot search and determinants.
struct Elimination<F> {
    /// `pivots[k]` is the (0-based) row chosen for column `k`.
    pivots: Vec<usize>,
    work: Vec<Vec<F>>,
    multipliers: Vec<Vec<F>>,
}

/// Gaussian elimination over the first `ncols` columns with
/// minimal-row-index pivoting. `Err(k)` names the 0-based column that had no
/// pivot.
fn eliminate<F: ExactField>(mut work: Vec<Vec<F>>, ncols: usize) -> std::result::Result<Elimination<F>, usize> {
    let nrows = work.len();
    let mut used = vec![false; nrows];
    let mut pivots = Vec::with_capacity(ncols);
    let mut multipliers = vec![vec![F::zero(); ncols]; nrows];
    for k in 0..ncols {
        let p = (0..nrows).find(|&r| !used[r] && !work[r][k].is_zero()).ok_or(k)?;
        used[p] = true;
        pivots.push(p);
        let pivot_row = work[p].clone();
        for r in 0..nrows {
            if used[r] || work[r][k].is_zero() {
                continue;
            }
            let f = work[r][k].clone() / pivot_row[k].clone();
            for c in k..ncols {
                if !pivot_row[c].is_zero() {
                    work[r][c] = work[r][c].clone() - f.clone() * pivot_row[c].clone();
                }
            }
            multipliers[r][k] = f;
        }
    }
    Ok(Elimination { pivots, work, multipliers })
}

/// `A = P·L·U` with `L` unipotent lower and `U` upper with nonzero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Plu<F> {
    pub p: PermutationSpec,
    pub l: TruncatedMatrix<F>,
    pub u: TruncatedMatrix<F>,
}

impl<F: ExactField> Plu<F> {
    pub fn reconstruct(&self) -> TruncatedMatrix<F> {
        let n = self.l.size();
        let p = self.p.matrix(n).expect("PLU permutations stay inside the block");
        p.mul(&self.l).mul(&self.u)
    }
}

pub fn plu_decompose<F: ExactField>(a: &TruncatedMatrix<F>) -> Result<Plu<F>> {
    let n = a.size();
    let e = eliminate(a.to_rows(), n).map_err(|k| Error::SingularTruncation { column: k + 1 })?;
    let l = TruncatedMatrix::from_fn(n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Greater => e.multipliers[e.pivots[r]][c].clone(),
        std::cmp::Ordering::Equal => F::one(),
        std::cmp::Ordering::Less => F::zero(),
    });
    let u = TruncatedMatrix::from_fn(n, |r, c| if c >= r { e.work[e.pivots[r]][c].clone() } else { F::zero() });
    let p = PermutationSpec::new(e.pivots.iter().map(|r| r + 1).collect())?;
    Ok(Plu { p, l, u })
}

/// Determinant of a square array by elimination.
pub fn determinant<F: ExactField>(rows: Vec<Vec<F>>) -> F {
    let n = rows.len();
    match eliminate(rows, n) {
        Err(_) => F::zero(),
        Ok(e) => {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| e.pivots[i] > e.pivots[j])
                .count();
            let prod = e
                .pivots
                .iter()
                .enumerate()
                .fold(F::one(), |acc, (k, &r)| acc * e.work[r][k].clone());
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        }
    }
}

/// `Δ^π_{β(1)}, …, Δ^π_{β(count)}`: minors on rows `π₁(1..β(m))` and columns
/// `π₂(1..β(m))`.
pub fn sigma_determinants<F: ExactField>(
    m: &InfiniteMatrixHandle<F>,
    rows: &PermutationSpec,
    cols: &PermutationSpec,
    beta: &BlockInjection,
    count: usize,
) -> Vec<F> {
    (1..=count)
        .map(|k| {
            let size = beta.apply(k);
            let ri = rows.first(size);
            let ci = cols.first(size);
            determinant(ri.iter().map(|&i| ci.iter().map(|&j| m.entry(i, j)).collect()).collect())
        })
        .collect()
}

/// Row prefix making the first `n` leading minors nonzero (with `π₂ = id`),
/// chosen greedily among rows `1..=row_budget`.
pub fn find_pivot_rows<F: ExactField>(
    m: &InfiniteMatrixHandle<F>,
    n: usize,
    row_budget: usize,
) -> Result<PermutationSpec> {
    if row_budget < n {
        return Err(Error::InvalidArgument(format!("row budget {row_budget} is smaller than {n}")));
    }
    let e = eliminate(m.window(row_budget, n), n)
        .map_err(|k| Error::WitnessNotFound { column: k + 1, budget: row_budget })?;
    let spec = PermutationSpec::new(e.pivots.iter().map(|r| r + 1).collect())?;
    let minors = sigma_determinants(m, &spec, &PermutationSpec::identity(), &BlockInjection::identity(), n);
    if let Some(k) = minors.iter().position(|d| d.is_zero()) {
        // pivots are nonzero, so this indicates a nondeterministic oracle
        return Err(Error::WitnessNotFound { column: k + 1, budget: row_budget });
    }
    Ok(spec)
}

/// Which kernel a γ-probe vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `M v = 0`: dependent columns.
    Columns,
    /// `Mᵀ v = 0`: dependent rows.
    Rows,
}

/// Structural argument that a kernel vector is a kernel vector of the whole
/// infinite matrix, not just of the tested window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Every column in the support is identically zero.
    ZeroColumn,
    /// Every row in the support is identically zero.
    ZeroRow,
    /// Every line in the support has all its nonzero entries inside the
    /// tested window.
    FiniteSupport,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GammaVerdict<F> {
    NoObstruction { n_cols: usize, row_budget: usize },
    KernelCandidate { side: Side, vector: FiniteSupportVector<F>, rows_checked: usize },
    KernelCertified { side: Side, vector: FiniteSupportVector<F>, rows_checked: usize, certificate: Certificate },
}

impl<F: Scalar> GammaVerdict<F> {
    pub fn label(&self) -> &'static str {
        match self {
            GammaVerdict::NoObstruction { .. } => "NO-OBSTRUCTION",
            GammaVerdict::KernelCandidate { .. } => "KERNEL-CANDIDATE",
            GammaVerdict::KernelCertified { .. } => "KERNEL-CERTIFIED",
        }
    }

    /// `{"verdict":"KERNEL-CERTIFIED","vector":{"1":"1"},"rows_checked":64,"certificate":"zero-column"}`
    pub fn to_json(&self) -> Value {
        match self {
            GammaVerdict::NoObstruction { n_cols, row_budget } => {
                json!({ "verdict": self.label(), "n_cols": n_cols, "rows_checked": row_budget })
            }
            GammaVerdict::KernelCandidate { side, vector, rows_checked } => json!({
                "verdict": self.label(),
                "side": side,
                "vector": vector.to_json(),
                "rows_checked": rows_checked,
            }),
            GammaVerdict::KernelCertified { side, vector, rows_checked, certificate } => json!({
                "verdict": self.label(),
                "side": side,
                "vector": vector.to_json(),
                "rows_checked": rows_checked,
                "certificate": certificate,
            }),
        }
    }
}

/// Tests the first `n_cols` columns (on rows `1..=row_budget`) and the first
/// `n_cols` rows (on columns `1..=row_budget`) for linear independence.
///
/// Finite data can refute γ-invertibility only with a structural certificate
/// from the handle; otherwise a dependency is reported as a candidate.
pub fn gamma_probe<F: ExactField>(m: &InfiniteMatrixHandle<F>, n_cols: usize, row_budget: usize) -> Result<GammaVerdict<F>> {
    if row_budget < n_cols {
        return Err(Error::InvalidArgument(format!("row budget {row_budget} is smaller than {n_cols}")));
    }
    let col_window = m.window(row_budget, n_cols);
    let col_kernel = kernel_of(&col_window, n_cols);
    if !col_kernel.is_empty() {
        return Ok(classify(m, Side::Columns, col_kernel, row_budget));
    }
    let row_window = m.window(n_cols, row_budget);
    let transposed: Vec<Vec<F>> = (0..row_budget).map(|c| (0..n_cols).map(|r| row_window[r][c].clone()).collect()).collect();
    let row_kernel = kernel_of(&transposed, n_cols);
    if !row_kernel.is_empty() {
        return Ok(classify(m, Side::Rows, row_kernel, row_budget));
    }
    Ok(GammaVerdict::NoObstruction { n_cols, row_budget })
}

fn classify<F: ExactField>(
    m: &InfiniteMatrixHandle<F>,
    side: Side,
    basis: Vec<FiniteSupportVector<F>>,
    budget: usize,
) -> GammaVerdict<F> {
    let certify = |v: &FiniteSupportVector<F>| -> Option<Certificate> {
        let (zero_line, support, zero_cert): (&dyn Fn(usize) -> bool, &dyn Fn(usize) -> Option<usize>, _) = match side {
            Side::Columns => (&|j| m.column_is_zero(j), &|j| m.col_support(j), Certificate::ZeroColumn),
            Side::Rows => (&|i| m.row_is_zero(i), &|i| m.row_support(i), Certificate::ZeroRow),
        };
        if v.support().all(zero_line) {
            Some(zero_cert)
        } else if v.support().all(|k| support(k).is_some_and(|s| s <= budget)) {
            Some(Certificate::FiniteSupport)
        } else {
            None
        }
    };
    let certified = basis.iter().find_map(|v| certify(v).map(|c| (v.clone(), c)));
    match certified {
        Some((vector, certificate)) => GammaVerdict::KernelCertified { side, vector, rows_checked: budget, certificate },
        None => GammaVerdict::KernelCandidate {
            side,
            vector: basis.into_iter().next().expect("nonempty basis"),
            rows_checked: budget,
        },
    }
}

/// Inverse of a triangular matrix with nonzero diagonal; keeps triangularity.
pub fn invert_triangular<F: ExactField>(a: &TruncatedMatrix<F>) -> Result<TruncatedMatrix<F>> {
    let n = a.size();
    if let Some(i) = (0..n).find(|&i| a[(i, i)].is_zero()) {
        if a.is_lower() || a.is_upper() {
            return Err(Error::ZeroDiagonal { index: i + 1 });
        }
    }
    if a.is_lower() {
        Ok(invert_lower(a))
    } else if a.is_upper() {
        Ok(invert_lower(&a.transpose()).transpose())
    } else {
        Err(Error::NotTriangular)
    }
}

fn invert_lower<F: ExactField>(a: &TruncatedMatrix<F>) -> TruncatedMatrix<F> {
    let n = a.size();
    let mut x = TruncatedMatrix::<F>::zeros(n);
    for j in 0..n {
        for i in j..n {
            let mut s = if i == j { F::one() } else { F::zero() };
            for k in j..i {
                s = s - a[(i, k)].clone() * x[(k, j)].clone();
            }
            x[(i, j)] = s / a[(i, i)].clone();
        }
    }
    x
}

/// Basis of `{v : A v = 0}`, each normalized so its first nonzero entry is 1.
pub fn kernel_basis<F: ExactField>(a: &TruncatedMatrix<F>) -> Vec<FiniteSupportVector<F>> {
    kernel_of(&a.to_rows(), a.size())
}

/// Kernel of a rectangular array with `ncols` columns, via reduced row
/// echelon form.
pub(crate) fn kernel_of<F: ExactField>(rows: &[Vec<F>], ncols: usize) -> Vec<FiniteSupportVector<F>> {
    let mut work: Vec<Vec<F>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..work.len()).find(|&r| !work[r][c].is_zero()) else { continue };
        work.swap(rank, p);
        let inv = F::one() / work[rank][c].clone();
        for x in work[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = work[rank].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
    }
    (0..ncols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); ncols];
            v[free] = F::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -work[r][free].clone();
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free column is nonzero");
            let v: Vec<F> = v.into_iter().map(|x| x / lead.clone()).collect();
            FiniteSupportVector::from_dense(&v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleman::translation_matrix;
    use crate::handle::Structure;
    use crate::scalar::{binomial, qi, Q};
    use crate::series::{Builtin, InfiniteSeries};

    fn ints(rows: &[&[i64]]) -> TruncatedMatrix<Q> {
        TruncatedMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn permutation_spec_extension() {
        let p = PermutationSpec::new(vec![2, 3, 4]).unwrap();
        assert_eq!(p.first(6), vec![2, 3, 4, 1, 5, 6]);
        assert!(PermutationSpec::new(vec![1, 1]).is_err());
        assert!(PermutationSpec::new(vec![0]).is_err());
        assert!(PermutationSpec::identity().is_identity_on(9));
        assert!(p.matrix::<Q>(3).is_err());
    }

    #[test]
    fn block_injection() {
        let b = BlockInjection::new(vec![2, 5]).unwrap();
        assert_eq!((1..=4).map(|k| b.apply(k)).collect::<Vec<_>>(), vec![2, 5, 6, 7]);
        assert!(BlockInjection::new(vec![3, 3]).is_err());
        assert_eq!(BlockInjection::identity().apply(4), 4);
    }

    #[test]
    fn plu_identity_swap_and_pascal() {
        let id = TruncatedMatrix::<Q>::identity(4);
        let plu = plu_decompose(&id).unwrap();
        assert!(plu.p.is_identity_on(4));
        assert_eq!((plu.l.clone(), plu.u.clone()), (id.clone(), id.clone()));

        let swap = ints(&[&[0, 1], &[1, 0]]);
        let plu = plu_decompose(&swap).unwrap();
        assert_eq!(plu.p.prefix(), &[2, 1]);
        assert_eq!(plu.l, TruncatedMatrix::identity(2));
        assert_eq!(plu.u, TruncatedMatrix::identity(2));
        assert_eq!(plu.reconstruct(), swap);

        let pascal = translation_matrix(&qi(1), 6);
        let plu = plu_decompose(&pascal).unwrap();
        assert!(plu.p.is_identity_on(6));
        assert_eq!(plu.l, pascal);
        assert_eq!(plu.u, TruncatedMatrix::identity(6));
    }

    #[test]
    fn plu_singular() {
        let a = ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(plu_decompose(&a), Err(Error::SingularTruncation { column: 2 }));
    }

    #[test]
    fn sigma_determinants_examples() {
        let id = InfiniteMatrixHandle::<Q>::identity();
        let (pid, bid) = (PermutationSpec::identity(), BlockInjection::identity());
        assert_eq!(sigma_determinants(&id, &pid, &pid, &bid, 5), vec![qi(1); 5]);
        let g = InfiniteMatrixHandle::<Q>::carleman(&InfiniteSeries::builtin(&Builtin::Geometric));
        assert_eq!(sigma_determinants(&g, &pid, &pid, &bid, 3), vec![qi(1), qi(-1), qi(-1)]);
        let tau = InfiniteMatrixHandle::<Q>::translation(qi(1));
        assert_eq!(sigma_determinants(&tau, &pid, &pid, &bid, 7), vec![qi(1); 7]);
        // β-block: only sizes 2 and 4 of the geometric minors
        let b = BlockInjection::new(vec![2, 4]).unwrap();
        let all = sigma_determinants(&g, &pid, &pid, &bid, 4);
        assert_eq!(sigma_determinants(&g, &pid, &pid, &b, 2), vec![all[1].clone(), all[3].clone()]);
    }

    #[test]
    fn determinant_sign_follows_row_swaps() {
        assert_eq!(determinant(ints(&[&[0, 1], &[1, 0]]).to_rows()), qi(-1));
        assert_eq!(determinant(ints(&[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]]).to_rows()), qi(-30));
        assert_eq!(determinant(ints(&[&[1, 2], &[2, 4]]).to_rows()), qi(0));
    }

    #[test]
    fn pivot_rows_examples() {
        let tau = InfiniteMatrixHandle::<Q>::translation(qi(2));
        assert!(find_pivot_rows(&tau, 6, 6).unwrap().is_identity_on(6));

        let n = 5;
        // row 1 zero, row i>1 is the unit row e_{i-1}
        let shifted = InfiniteMatrixHandle::<Q>::from_fn(Structure::General, "shifted", |i, j| {
            if i >= 2 && j == i - 1 {
                qi(1)
            } else {
                qi(0)
            }
        });
        let spec = find_pivot_rows(&shifted, n, n + 1).unwrap();
        assert_eq!(spec.prefix(), &[2, 3, 4, 5, 6]);
        assert_eq!(find_pivot_rows(&shifted, n, n), Err(Error::WitnessNotFound { column: 5, budget: 5 }));
    }

    #[test]
    fn gamma_probe_examples() {
        let id = InfiniteMatrixHandle::<Q>::identity();
        assert_eq!(gamma_probe(&id, 6, 12).unwrap(), GammaVerdict::NoObstruction { n_cols: 6, row_budget: 12 });
        let tau = InfiniteMatrixHandle::<Q>::translation(qi(1));
        assert_eq!(gamma_probe(&tau, 8, 16).unwrap().label(), "NO-OBSTRUCTION");
    }

    #[test]
    fn gamma_probe_candidate_without_structure() {
        // columns 1 and 2 agree on the window but nothing is known beyond it
        let m = InfiniteMatrixHandle::<Q>::from_fn(Structure::General, "twins", |i, j| {
            if j <= 2 {
                qi(1)
            } else if i == j {
                qi(1)
            } else {
                qi(0)
            }
        });
        match gamma_probe(&m, 3, 6).unwrap() {
            GammaVerdict::KernelCandidate { side, vector, .. } => {
                assert_eq!(side, Side::Columns);
                assert_eq!(vector.to_dense(3), vec![qi(1), qi(-1), qi(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_probe_certifies_explicit_and_upper() {
        let m = ints(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let v = gamma_probe(&InfiniteMatrixHandle::explicit(m), 3, 3).unwrap();
        assert!(matches!(v, GammaVerdict::KernelCertified { certificate: Certificate::FiniteSupport, .. }));
        let zero_col = ints(&[&[0, 0], &[0, 1]]);
        let v = gamma_probe(&InfiniteMatrixHandle::explicit(zero_col), 2, 4).unwrap();
        assert_eq!(v.to_json()["certificate"], "zero-column");
        assert_eq!(v.to_json()["vector"], json!({"1": "1"}));
        // upper triangular with a zero diagonal entry: dependent columns certified
        let u = InfiniteMatrixHandle::<Q>::from_fn(Structure::Upper, "u", |i, j| {
            if i == 2 && j == 2 || i > j {
                qi(0)
            } else {
                qi(1)
            }
        });
        let v = gamma_probe(&u, 4, 8).unwrap();
        assert!(matches!(v, GammaVerdict::KernelCertified { side: Side::Columns, .. }), "{v:?}");
    }

    #[test]
    fn gamma_probe_sees_row_dependence() {
        // rows 1 and 2 equal on every column, columns independent on the window
        let m = InfiniteMatrixHandle::<Q>::from_fn(Structure::General, "dup-rows", |i, j| {
            let r = if i == 1 { 2 } else { i };
            if r == j + 1 {
                qi(1)
            } else {
                qi(0)
            }
        });
        let v = gamma_probe(&m, 3, 6).unwrap();
        assert!(matches!(v, GammaVerdict::KernelCandidate { side: Side::Rows, .. }), "{v:?}");
    }

    #[test]
    fn invert_triangular_examples() {
        let pascal = translation_matrix(&qi(1), 7);
        let inv = invert_triangular(&pascal).unwrap();
        let expect = TruncatedMatrix::from_fn(7, |i, j| {
            if j > i {
                qi(0)
            } else {
                let s = if (i - j) % 2 == 0 { 1 } else { -1 };
                Q::from_integer(binomial(i, j)) * qi(s)
            }
        });
        assert_eq!(inv, expect);
        assert_eq!(inv.mul(&pascal), TruncatedMatrix::identity(7));
        let id = TruncatedMatrix::<Q>::identity(3);
        assert_eq!(invert_triangular(&id).unwrap(), id);
        assert_eq!(invert_triangular(&ints(&[&[1, 0], &[3, 0]])), Err(Error::ZeroDiagonal { index: 2 }));
        assert_eq!(invert_triangular(&ints(&[&[1, 2], &[3, 4]])), Err(Error::NotTriangular));
    }

    #[test]
    fn kernel_basis_examples() {
        assert!(kernel_basis(&TruncatedMatrix::<Q>::identity(4)).is_empty());
        let zero_first = ints(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(kernel_basis(&zero_first), vec![FiniteSupportVector::unit(1)]);
        let ones = ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(kernel_basis(&ones), vec![FiniteSupportVector::from_dense(&[qi(1), qi(-1)])]);
    }
}
