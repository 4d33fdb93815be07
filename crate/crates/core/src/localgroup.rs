//! A local Lie group on the universal cover of the plane punctured at
//! `(−1, 0)`.
//!
//! Points carry a continuous argument of `z − σ`. The product lifts the right
//! factor's straight path, translated to start at the left factor, so it is
//! only defined when that path clears the puncture and the right factor sits
//! on its straight sheet.

use std::f64::consts::{PI, TAU};

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// The removed point `σ`.
pub const PUNCTURE: [f64; 2] = [-1.0, 0.0];
/// Minimum distance a path must keep from the puncture.
pub const CLEARANCE: f64 = 1e-9;
/// Angle tolerance for comparing a stored argument with its straight lift.
pub const ANGLE_TOL: f64 = 1e-6 * TAU;
/// Largest argument change accepted on a single subdivision step.
pub const MAX_STEP: f64 = PI / 4.0;

const MAX_DEPTH: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveredPoint {
    pub z: [f64; 2],
    /// Continuous argument of `z − σ`.
    pub theta: f64,
}

impl CoveredPoint {
    /// The lift `ē` of the origin on sheet 0.
    pub const IDENTITY: CoveredPoint = CoveredPoint { z: [0.0, 0.0], theta: 0.0 };

    /// Checks clearance from the puncture and that `theta` is an argument of `z − σ`.
    pub fn new(z: [f64; 2], theta: f64) -> Result<Self> {
        let d = dist(z, PUNCTURE);
        if d <= CLEARANCE {
            return Err(Error::SingularPath { clearance: d });
        }
        let off = wrap(theta - principal_arg(z));
        if off.abs() > ANGLE_TOL {
            return Err(Error::InvalidArgument(format!("theta {theta} is not an argument of z - sigma at {z:?}")));
        }
        Ok(Self { z, theta })
    }

    /// Lift of `z` along the straight segment from the origin.
    pub fn straight(z: [f64; 2]) -> Result<Self> {
        lift_segment(&Self::IDENTITY, z)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn principal_arg(z: [f64; 2]) -> f64 {
    (z[1] - PUNCTURE[1]).atan2(z[0] - PUNCTURE[0])
}

/// Reduces an angle to `(−π, π]`.
fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    if len2 == 0.0 {
        return dist(a, p);
    }
    let s = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    dist([a[0] + s * d[0], a[1] + s * d[1]], p)
}

fn arg_change(a: [f64; 2], b: [f64; 2], depth: u32) -> f64 {
    let step = wrap(principal_arg(b) - principal_arg(a));
    if step.abs() <= MAX_STEP || depth >= MAX_DEPTH {
        return step;
    }
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    arg_change(a, mid, depth + 1) + arg_change(mid, b, depth + 1)
}

/// Carries `start` along the straight segment to `target`.
pub fn lift_segment(start: &CoveredPoint, target: [f64; 2]) -> Result<CoveredPoint> {
    let clearance = segment_distance(start.z, target, PUNCTURE);
    if clearance <= CLEARANCE {
        return Err(Error::SingularPath { clearance });
    }
    if start.z == target {
        return Ok(*start);
    }
    Ok(CoveredPoint { z: target, theta: start.theta + arg_change(start.z, target, 0) })
}

/// Argument of the straight lift of `z`.
pub fn theta_straight(z: [f64; 2]) -> Result<f64> {
    CoveredPoint::straight(z)
        .map(|p| p.theta)
        .map_err(|_| Error::ReferencePath { x: z[0], y: z[1] })
}

/// Number of turns separating `x` from the straight lift of its base point.
pub fn sheet_index(x: &CoveredPoint) -> Result<i64> {
    Ok(((x.theta - theta_straight(x.z)?) / TAU).round() as i64)
}

pub fn is_straight_representable(x: &CoveredPoint) -> bool {
    theta_straight(x.z).is_ok_and(|t| (x.theta - t).abs() <= ANGLE_TOL)
}

/// `x̄ · ȳ`: the lift from `x̄` of the segment `x → x + y`.
pub fn local_product(x: &CoveredPoint, y: &CoveredPoint) -> Result<CoveredPoint> {
    if x.is_identity() {
        return Ok(*y);
    }
    if !is_straight_representable(y) {
        return Err(Error::UndefinedProduct(format!(
            "right factor at {:?} with theta {} is not on its straight sheet",
            y.z, y.theta
        )));
    }
    let target = [x.z[0] + y.z[0], x.z[1] + y.z[1]];
    lift_segment(x, target).map_err(|e| Error::UndefinedProduct(format!("translated path: {e}")))
}

/// `ȳ` with `ȳ · x̄ = ē`.
pub fn local_inverse(x: &CoveredPoint) -> Result<CoveredPoint> {
    if x.is_identity() {
        return Ok(*x);
    }
    if !is_straight_representable(x) {
        return Err(Error::UndefinedInverse(format!("{:?} is not on its straight sheet", x.z)));
    }
    let base = [-x.z[0], -x.z[1]];
    let probe = CoveredPoint { z: base, theta: principal_arg(base) };
    let end = lift_segment(&probe, [0.0, 0.0]).map_err(|e| Error::UndefinedInverse(e.to_string()))?;
    // shift so that the path ends at theta 0
    Ok(CoveredPoint { z: base, theta: probe.theta - end.theta })
}

#[derive(Clone, Debug)]
pub struct AssociativityReport {
    pub a: CoveredPoint,
    pub b: CoveredPoint,
    pub c: CoveredPoint,
    /// `(ā b̄) c̄`
    pub left: CoveredPoint,
    /// `ā (b̄ c̄)`
    pub right: CoveredPoint,
    pub sheet_left: i64,
    pub sheet_right: i64,
    /// Winding of the closed path `0 → a → a + b → 0` around the puncture.
    pub triangle_winding: i64,
}

impl AssociativityReport {
    pub fn broken(&self) -> bool {
        self.sheet_left != self.sheet_right
    }

    pub fn verdict(&self) -> String {
        if self.broken() {
            format!("global associativity broken: sheets {} vs {}", self.sheet_left, self.sheet_right)
        } else {
            format!("associativity holds: sheet {}", self.sheet_left)
        }
    }

    pub fn to_json(&self) -> Value {
        let pt = |p: &CoveredPoint| json!({ "z": p.z, "theta": p.theta, "theta_over_pi": p.theta / PI });
        json!({
            "a": pt(&self.a),
            "b": pt(&self.b),
            "c": pt(&self.c),
            "left": pt(&self.left),
            "right": pt(&self.right),
            "sheet_left": self.sheet_left,
            "sheet_right": self.sheet_right,
            "triangle_winding": self.triangle_winding,
            "verdict": self.verdict(),
        })
    }
}

/// Both bracketings of `ā b̄ c̄` for `a = (−2, 1)`, `b = (0, −2)`, `c = (2, 1)`.
pub fn associativity_demo() -> Result<AssociativityReport> {
    triple_products([-2.0, 1.0], [0.0, -2.0], [2.0, 1.0])
}

/// Both bracketings for three straight lifts.
pub fn triple_products(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Result<AssociativityReport> {
    let (a, b, c) = (CoveredPoint::straight(a)?, CoveredPoint::straight(b)?, CoveredPoint::straight(c)?);
    let left = local_product(&local_product(&a, &b)?, &c)?;
    let right = local_product(&a, &local_product(&b, &c)?)?;
    let ab = [a.z[0] + b.z[0], a.z[1] + b.z[1]];
    let mut p = CoveredPoint::IDENTITY;
    for v in [a.z, ab, [0.0, 0.0]] {
        p = lift_segment(&p, v)?;
    }
    Ok(AssociativityReport {
        sheet_left: sheet_index(&left)?,
        sheet_right: sheet_index(&right)?,
        triangle_winding: (p.theta / TAU).round() as i64,
        a,
        b,
        c,
        left,
        right,
    })
}
