mod common;

use std::f64::consts::PI;

use common::*;
use lie_matrix::convergence::{entry_series_probe, latent_product_report, Classification, ProbeParams};
use lie_matrix::matrixcore::GammaVerdict;
use lie_matrix::poly::BiPoly;
use lie_matrix::scalar::{q, qi, Q, C64};
use lie_matrix::scenarios::{mu, rotation_diagonal};
use lie_matrix::series::{Builtin, InfiniteSeries};
use lie_matrix::{
    adjoint_family, adjoint_handle, adjoint_mu_check, circle_cover_extend, circle_generator_matrix, gamma_probe,
    truncated_multiply, InfiniteMatrixHandle, Junction, LatentProduct, Structure,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational_samples() -> Vec<Q> {
    let mut v = Vec::new();
    for n in -5..=5 {
        for d in [1, 2, 3] {
            let x = q(n, d);
            if x != qi(1) && !v.contains(&x) {
                v.push(x);
            }
        }
    }
    v
}

#[test]
fn adjoint_identity_at_several_sizes() {
    for n in [2, 3, 5, 10] {
        let check = adjoint_mu_check(n).unwrap();
        assert!(check.holds && check.residual.is_zero(), "n = {n}");
    }
}

#[test]
fn adjoint_rational_products_follow_mu() {
    let fam = adjoint_family(6).unwrap();
    let samples = rational_samples();
    for a in samples.iter().take(8) {
        for b in samples.iter().rev().take(8) {
            assert_eq!(fam.m_rational(a).mul(&fam.m_rational(b)), fam.m_rational(&mu(a, b)));
        }
    }
}

#[test]
fn adjoint_closed_form_first_row() {
    let fam = adjoint_family(9).unwrap();
    let t = BiPoly::var(0);
    for c in 0..9 {
        let want = match c {
            0 => BiPoly::one() - t.clone(),
            c if c % 2 == 1 => t.clone(),
            _ => -t.clone(),
        };
        assert_eq!(fam.m[(0, c)], want);
    }
}

#[test]
fn gamma_probe_separates_t_equal_one() {
    let v = gamma_probe(&adjoint_handle(qi(1)), 8, 16).unwrap();
    assert_eq!(v.label(), "KERNEL-CERTIFIED");
    let samples = rational_samples();
    assert!(samples.len() >= 20);
    for t in samples {
        let v = gamma_probe(&adjoint_handle(t.clone()), 8, 16).unwrap();
        assert!(matches!(v, GammaVerdict::NoObstruction { .. }), "t = {t}");
    }
}

proptest! {
    #[test]
    fn circle_is_rotation_diagonal(y in -1.04f64..1.04, n in 2usize..9) {
        let r = circle_generator_matrix(y, n, 1e-10).unwrap();
        let diag = rotation_diagonal(y, n);
        prop_assert!(r.certified.max_deviation(&diag) < 1e-9);
        let e = C64::from_polar(1.0, y);
        prop_assert!((r.composite[1] - e).norm() < 1e-9);
    }

    #[test]
    fn rotations_add_angles(y1 in -1.0f64..1.0, y2 in -1.0f64..1.0) {
        let a = circle_generator_matrix(y1, 6, 1e-11).unwrap().certified;
        let b = circle_generator_matrix(y2, 6, 1e-11).unwrap().certified;
        prop_assert!(a.mul(&b).max_deviation(&rotation_diagonal(y1 + y2, 6)) < 1e-9);
    }

    #[test]
    fn mu_hits_one_only_from_one(a in small_q(), b in small_q()) {
        let one = qi(1);
        prop_assert_eq!(mu(&a, &b) == one, a == one || b == one);
    }

    /// Finite sums: a lower left factor or an upper right factor.
    #[test]
    fn structured_junctions_are_finite_exact(a in small_q(), b in small_q(), i in 1usize..6, j in 1usize..6) {
        let t = InfiniteMatrixHandle::<Q>::translation(a);
        let exp0 = InfiniteMatrixHandle::carleman(&InfiniteSeries::builtin(&Builtin::Expm1));
        let general = InfiniteMatrixHandle::<Q>::from_fn(Structure::General, "ones", move |_, _| b.clone());
        let p = ProbeParams::default();
        for (l, r) in [(&t, &general), (&general, &exp0), (&t, &exp0)] {
            let rep = entry_series_probe(l, r, i, j, &p);
            prop_assert_eq!(rep.classification, Classification::FiniteExact);
            let block = truncated_multiply(l, r, 6);
            prop_assert_eq!(rep.value.unwrap(), block[(i - 1, j - 1)].clone());
        }
    }
}

#[test]
fn cover_reaches_past_the_certified_arc() {
    let three = circle_cover_extend(&[0.9, 0.9, 0.9], 6, 1e-11).unwrap();
    assert!(three.total_angle > 2.0 * PI / 3.0);
    assert!(three.max_deviation < 1e-9);
    let eight = circle_cover_extend(&[0.8; 8], 6, 1e-11).unwrap();
    assert!(eight.total_angle > 2.0 * PI);
    assert!(eight.max_deviation < 1e-9);
    let back = circle_cover_extend(&[0.7, -0.7], 6, 1e-11).unwrap();
    assert!(back.max_deviation < 2e-11);
}

#[test]
fn lul_of_conjugated_translation() {
    // τ_a ∘ γ ∘ τ_{-a} with γ the isotropy part of exp: source a, target a
    let a = q(1, 2);
    let shift = a.clone();
    let g = InfiniteSeries::from_fn("conjugated", a.clone(), None, move |k| {
        if k == 0 {
            shift.clone()
        } else {
            Builtin::Expm1.coefficient(k)
        }
    })
    .unwrap();
    let lp = lie_matrix::lul_decompose(&g);
    let reports = latent_product_report(&lp, 4, &ProbeParams::default());
    assert!(reports[0].entries.iter().all(|e| e.classification == Classification::FiniteExact));
    assert_eq!(reports[1].junction, Junction::Latent);
    assert_eq!(reports[1].entries.len(), 16);
}

#[test]
fn latent_h_translation_product_diverges() {
    let lp = LatentProduct::new(
        vec![
            InfiniteMatrixHandle::carleman(&InfiniteSeries::builtin(&Builtin::H)),
            InfiniteMatrixHandle::translation(qi(-1)),
        ],
        vec![Junction::Latent],
    )
    .unwrap();
    let r = latent_product_report(&lp, 4, &ProbeParams::default());
    // oracle: t_k = h-coefficient (−1)^{k−1} times (−1)^{k−1} C(k−1, 0) for k ≥ 2
    let e = r[0].entry(2, 1).unwrap();
    for ev in &e.evidence {
        let want = if ev.k == 1 { Q::zero() } else { Q::one() };
        assert_eq!(ev.term, want);
    }
    assert_eq!(e.classification, Classification::DivergentTermsDontVanish);
}
