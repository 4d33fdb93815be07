use std::f64::consts::{PI, TAU};

use lie_matrix::localgroup::{is_straight_representable, triple_products, PUNCTURE};
use lie_matrix::{associativity_demo, lift_segment, local_inverse, local_product, sheet_index, CoveredPoint};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = [f64; 2]> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y)| [x, y])
}

/// Signed area of a polygon.
fn shoelace(p: &[[f64; 2]]) -> f64 {
    (0..p.len()).map(|i| {
        let (a, b) = (p[i], p[(i + 1) % p.len()]);
        a[0] * b[1] - b[0] * a[1]
    }).sum::<f64>() / 2.0
}

/// Whether `s` lies strictly inside triangle `t`, by edge signs.
fn inside(t: [[f64; 2]; 3], s: [f64; 2]) -> bool {
    let side = |a: [f64; 2], b: [f64; 2]| (b[0] - a[0]) * (s[1] - a[1]) - (b[1] - a[1]) * (s[0] - a[0]);
    let d = [side(t[0], t[1]), side(t[1], t[2]), side(t[2], t[0])];
    d.iter().all(|&x| x > 0.0) || d.iter().all(|&x| x < 0.0)
}

#[test]
fn demo_matches_triangle_geometry() {
    let r = associativity_demo().unwrap();
    let tri = [[0.0, 0.0], [-2.0, 1.0], [-2.0, -1.0]];
    assert!(inside(tri, PUNCTURE));
    let orientation = shoelace(&tri).signum() as i64;
    assert_eq!(r.triangle_winding, orientation);
    assert_eq!(r.sheet_left - r.sheet_right, 1);
    assert!((r.left.theta / PI - 2.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn lifting_back_restores_theta(a in point(), b in point()) {
        prop_assume!(lift_segment(&CoveredPoint::IDENTITY, a).is_ok());
        let start = CoveredPoint::straight(a).unwrap();
        if let Ok(there) = lift_segment(&start, b) {
            let back = lift_segment(&there, a).unwrap();
            prop_assert!((back.theta - start.theta).abs() < 1e-9);
        }
    }

    #[test]
    fn straight_points_sit_on_sheet_zero(z in point()) {
        if let Ok(p) = CoveredPoint::straight(z) {
            prop_assert_eq!(sheet_index(&p).unwrap(), 0);
            prop_assert!(is_straight_representable(&p));
            let off = (p.theta - (z[1] - PUNCTURE[1]).atan2(z[0] - PUNCTURE[0])) / TAU;
            prop_assert!((off - off.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_axioms_hold(z in point(), turns in -2i32..3) {
        if let Ok(p) = CoveredPoint::straight(z) {
            let x = CoveredPoint { theta: p.theta + TAU * f64::from(turns), ..p };
            let e = CoveredPoint::IDENTITY;
            prop_assert_eq!(local_product(&e, &x).unwrap(), x);
            prop_assert_eq!(local_product(&x, &e).unwrap(), x);
        }
    }

    #[test]
    fn inverse_round_trip(z in point()) {
        if let Ok(x) = CoveredPoint::straight(z) {
            if let Ok(y) = local_inverse(&x) {
                let e = local_product(&y, &x).unwrap();
                prop_assert!(e.z[0].abs() < 1e-9 && e.z[1].abs() < 1e-9 && e.theta.abs() < 1e-9);
            }
        }
    }

    /// Left bracketing follows `a → a+b → a+b+c`, right goes `a → a+b+c` directly,
    /// so the sheets differ by the winding of that triangle.
    #[test]
    fn associativity_defect_is_triangle_winding(a in point(), b in point(), c in point()) {
        if let Ok(r) = triple_products(a, b, c) {
            let ab = [a[0] + b[0], a[1] + b[1]];
            let abc = [ab[0] + c[0], ab[1] + c[1]];
            let tri = [a, ab, abc];
            let expect = if inside(tri, PUNCTURE) { shoelace(&tri).signum() as i64 } else { 0 };
            prop_assert_eq!(r.sheet_left - r.sheet_right, expect);
        }
    }
}
