#![allow(dead_code)]

use lie_matrix::scalar::{q, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=5).prop_map(|(a, b)| q(a, b))
}

pub fn nonzero_q() -> impl Strategy<Value = Q> {
    small_q().prop_filter("nonzero", |x| !x.is_zero())
}

/// Naive truncated product of coefficient lists.
pub fn poly_mul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_pow(a: &[Q], m: usize, n: usize) -> Vec<Q> {
    let mut acc = vec![Q::zero(); n + 1];
    acc[0] = Q::one();
    for _ in 0..m {
        acc = poly_mul(&acc, a, n);
    }
    acc
}

/// `1 / a` for `a[0] != 0`.
pub fn reciprocal(a: &[Q], n: usize) -> Vec<Q> {
    let mut r = vec![Q::zero(); n + 1];
    r[0] = Q::one() / &a[0];
    for k in 1..=n {
        let s: Q = (1..=k.min(a.len() - 1)).map(|j| &a[j] * &r[k - j]).sum();
        r[k] = -s / &a[0];
    }
    r
}

/// `outer(inner(x))` where `inner(0) = 0`, by summing powers.
pub fn substitute(outer: &[Q], inner: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n + 1];
    for (m, c) in outer.iter().enumerate().take(n + 1) {
        for (k, x) in poly_pow(inner, m, n).into_iter().enumerate() {
            out[k] += c * x;
        }
    }
    out
}

/// `(x + a)^k` expanded: re-centres `Σ c_k (x)^k` at `x = y + a`.
pub fn recenter(c: &[Q], a: &Q, n: usize) -> Vec<Q> {
    substitute(c, &[a.clone(), Q::one()], n)
}

pub fn rows(m: &[&[i64]]) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
}
