mod common;

use common::*;
use lie_matrix::handle::Structure;
use lie_matrix::matrixcore::{determinant, GammaVerdict};
use lie_matrix::scalar::{qi, Q};
use lie_matrix::{
    find_pivot_rows, gamma_probe, invert_triangular, kernel_basis, plu_decompose, sigma_determinants, BlockInjection,
    InfiniteMatrixHandle, PermutationSpec, TruncatedMatrix,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = TruncatedMatrix<Q>> {
    // many zeros so that pivoting is exercised
    let entry = prop_oneof![3 => Just(qi(0)), 4 => small_q()];
    prop::collection::vec(entry, n * n).prop_map(move |v| {
        TruncatedMatrix::from_rows(v.chunks(n).map(<[Q]>::to_vec).collect()).unwrap()
    })
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &TruncatedMatrix<Q>) -> Q {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.size();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod = (0..n).fold(Q::one(), |acc, i| acc * m[(i, p[i])].clone());
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plu_reconstructs(m in (1usize..=5).prop_flat_map(matrix)) {
        match plu_decompose(&m) {
            Ok(plu) => {
                prop_assert!(plu.l.is_lower() && plu.l.has_unit_diagonal());
                prop_assert!(plu.u.is_upper());
                prop_assert!((0..m.size()).all(|i| !plu.u[(i, i)].is_zero()));
                prop_assert_eq!(plu.reconstruct(), m);
            }
            Err(_) => prop_assert!(leibniz(&m).is_zero()),
        }
    }

    #[test]
    fn determinant_matches_leibniz(m in (1usize..=5).prop_flat_map(matrix)) {
        prop_assert_eq!(determinant(m.to_rows()), leibniz(&m));
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in (1usize..=5).prop_flat_map(matrix)) {
        let n = m.size();
        let basis = kernel_basis(&m);
        prop_assert_eq!(basis.is_empty(), !leibniz(&m).is_zero());
        for v in basis {
            let d = v.to_dense(n);
            prop_assert_eq!(d.iter().find(|x| !x.is_zero()).cloned(), Some(Q::one()));
            for r in 0..n {
                let s: Q = (0..n).map(|c| m[(r, c)].clone() * d[c].clone()).sum();
                prop_assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn triangular_inverse(diag in prop::collection::vec(nonzero_q(), 5), below in prop::collection::vec(small_q(), 25), upper in any::<bool>()) {
        let l = TruncatedMatrix::from_fn(5, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Equal => diag[r].clone(),
            std::cmp::Ordering::Greater => below[r * 5 + c].clone(),
            std::cmp::Ordering::Less => Q::zero(),
        });
        let a = if upper { l.transpose() } else { l };
        let inv = invert_triangular(&a).unwrap();
        prop_assert_eq!(inv.is_upper(), upper);
        prop_assert_eq!(a.mul(&inv), TruncatedMatrix::identity(5));
    }

    /// Invertible triangular families with honest tags are never certified singular.
    #[test]
    fn gamma_probe_never_certifies_invertible_families(seed in prop::collection::vec(nonzero_q(), 8), upper in any::<bool>()) {
        let s = seed.clone();
        let f = move |i: usize, j: usize| -> Q {
            let (hi, lo) = if upper { (j, i) } else { (i, j) };
            if hi < lo { Q::zero() } else { s[(i * 3 + j * 5) % s.len()].clone() }
        };
        let tag = if upper { Structure::Upper } else { Structure::Lower };
        let h = InfiniteMatrixHandle::from_fn(tag, "triangular", f);
        let v = gamma_probe(&h, 5, 10).unwrap();
        let certified = matches!(v, GammaVerdict::KernelCertified { .. });
        prop_assert!(!certified);
    }

    #[test]
    fn nested_truncations_share_pivots(m in matrix(6)) {
        let h = InfiniteMatrixHandle::explicit(m.clone());
        if let Ok(spec) = find_pivot_rows(&h, 4, 6) {
            let minors = sigma_determinants(&h, &spec, &PermutationSpec::identity(), &BlockInjection::identity(), 4);
            prop_assert!(minors.iter().all(|d| !d.is_zero()));
            if let Ok(smaller) = find_pivot_rows(&h, 3, 6) {
                prop_assert_eq!(&spec.prefix()[..3], smaller.prefix());
            }
        }
    }
}

#[test]
fn sigma_determinants_of_shifted_identity_need_permutation() {
    let h = InfiniteMatrixHandle::<Q>::from_fn(Structure::General, "shift", |i, j| if i == j + 1 { qi(1) } else { qi(0) });
    let id = PermutationSpec::identity();
    let plain = sigma_determinants(&h, &id, &id, &BlockInjection::identity(), 3);
    assert!(plain.iter().all(Zero::is_zero));
    let spec = find_pivot_rows(&h, 3, 4).unwrap();
    assert_eq!(spec.first(4), vec![2, 3, 4, 1]);
    let permuted = sigma_determinants(&h, &spec, &id, &BlockInjection::identity(), 3);
    assert_eq!(permuted, vec![qi(1); 3]);
}
