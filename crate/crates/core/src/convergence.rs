//! Entrywise probes of products `A·B` whose entries are infinite series
//! `Σ_k A(i,k)·B(k,j)`.
//!
//! Convergence cannot be decided from finitely many terms, so apart from
//! structurally finite sums every verdict is heuristic. Magnitudes are
//! compared exactly as rationals.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::carleman::{Junction, LatentProduct};
use crate::handle::InfiniteMatrixHandle;
use crate::scalar::{qi, Q};

pub const DEFAULT_K_MAX: usize = 64;
pub const DEFAULT_WINDOW: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    FiniteExact,
    LikelyConvergent,
    DivergentTermsDontVanish,
    Inconclusive,
}

impl Classification {
    pub const ALL: [Classification; 4] = [
        Classification::FiniteExact,
        Classification::LikelyConvergent,
        Classification::DivergentTermsDontVanish,
        Classification::Inconclusive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::FiniteExact => "finite-exact",
            Classification::LikelyConvergent => "likely-convergent",
            Classification::DivergentTermsDontVanish => "divergent-terms-dont-vanish",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

/// One summand `t_k = A(i,k)·B(k,j)` together with the partial sum through it.
#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub k: usize,
    pub term: Q,
    pub partial_sum: Q,
}

/// Probe settings: number of terms, trailing window and divergence floor.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeParams {
    pub k_max: usize,
    pub window: usize,
    pub floor: Q,
}

impl Default for ProbeParams {
    fn default() -> Self {
        Self { k_max: DEFAULT_K_MAX, window: DEFAULT_WINDOW, floor: qi(1) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryProbeReport {
    /// 1-based `(i, j)`.
    pub entry: (usize, usize),
    pub classification: Classification,
    /// Exact value, present only for `FiniteExact`.
    pub value: Option<Q>,
    pub evidence: Vec<Evidence>,
}

impl EntryProbeReport {
    pub fn terms(&self) -> impl Iterator<Item = &Q> {
        self.evidence.iter().map(|e| &e.term)
    }

    pub fn last_partial_sum(&self) -> Q {
        self.evidence.last().map_or_else(Q::zero, |e| e.partial_sum.clone())
    }

    /// Entry, classification, value and the first and last four terms.
    pub fn to_json(&self) -> Value {
        let render = |e: &Evidence| json!({ "k": e.k, "term": e.term.to_string() });
        let n = self.evidence.len();
        let head: Vec<Value> = self.evidence.iter().take(4).map(render).collect();
        let tail: Vec<Value> = self.evidence.iter().skip(n.saturating_sub(4).max(4)).map(render).collect();
        json!({
            "entry": [self.entry.0, self.entry.1],
            "classification": self.classification,
            "value": self.value.as_ref().map(ToString::to_string),
            "terms_computed": n,
            "partial_sum": self.last_partial_sum().to_string(),
            "first_terms": head,
            "last_terms": tail,
        })
    }
}

/// Probes entry `(i, j)` of `A·B`.
///
/// If the structure of `A` or `B` bounds the support of the sum, every
/// nonzero term is computed and the result is `FiniteExact`. Otherwise
/// `k_max` terms are computed and the trailing `window` of them decides:
/// all magnitudes `≥ floor`, or strictly increasing, gives
/// `DivergentTermsDontVanish`; strictly decreasing gives `LikelyConvergent`.
pub fn entry_series_probe(
    a: &InfiniteMatrixHandle<Q>,
    b: &InfiniteMatrixHandle<Q>,
    i: usize,
    j: usize,
    params: &ProbeParams,
) -> EntryProbeReport {
    let bound = match (a.row_support(i), b.col_support(j)) {
        (Some(r), Some(c)) => Some(r.min(c)),
        (r, c) => r.or(c),
    };
    let count = bound.unwrap_or(params.k_max);
    let mut evidence = Vec::with_capacity(count);
    let mut sum = Q::zero();
    for k in 1..=count {
        let term = a.entry(i, k) * b.entry(k, j);
        sum = sum + term.clone();
        evidence.push(Evidence { k, term, partial_sum: sum.clone() });
    }
    if bound.is_some() {
        return EntryProbeReport { entry: (i, j), classification: Classification::FiniteExact, value: Some(sum), evidence };
    }
    let classification = classify_tail(&evidence, params);
    EntryProbeReport { entry: (i, j), classification, value: None, evidence }
}

fn classify_tail(evidence: &[Evidence], params: &ProbeParams) -> Classification {
    let w = params.window.max(2);
    if evidence.len() < w {
        return Classification::Inconclusive;
    }
    let mags: Vec<Q> = evidence[evidence.len() - w..].iter().map(|e| e.term.abs()).collect();
    let increasing = mags.windows(2).all(|p| p[0] < p[1]);
    if mags.iter().all(|m| *m >= params.floor) || increasing {
        return Classification::DivergentTermsDontVanish;
    }
    if mags.windows(2).all(|p| p[0] > p[1]) {
        return Classification::LikelyConvergent;
    }
    Classification::Inconclusive
}

/// Probes of one adjacent pair of factors over a square window.
#[derive(Clone, Debug)]
pub struct JunctionReport {
    /// 1-based position of the junction (between factors `index` and `index + 1`).
    pub index: usize,
    pub junction: Junction,
    /// Row-major, `window × window`.
    pub entries: Vec<EntryProbeReport>,
}

impl JunctionReport {
    pub fn counts(&self) -> BTreeMap<Classification, usize> {
        let mut counts: BTreeMap<Classification, usize> = Classification::ALL.iter().map(|&c| (c, 0)).collect();
        for e in &self.entries {
            *counts.entry(e.classification).or_default() += 1;
        }
        counts
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&EntryProbeReport> {
        self.entries.iter().find(|e| e.entry == (i, j))
    }

    pub fn to_json(&self) -> Value {
        let counts: serde_json::Map<String, Value> =
            self.counts().into_iter().map(|(c, n)| (c.as_str().to_string(), json!(n))).collect();
        json!({
            "junction": self.index,
            "flag": self.junction,
            "counts": counts,
            "entries": self.entries.iter().map(EntryProbeReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Probes every adjacent pair of factors of `lp` on the leading `window × window` block.
pub fn latent_product_report(lp: &LatentProduct<Q>, window: usize, params: &ProbeParams) -> Vec<JunctionReport> {
    lp.factors()
        .windows(2)
        .zip(lp.junctions())
        .enumerate()
        .map(|(idx, (pair, &junction))| {
            let entries = std::thread::scope(|s| {
                let handles: Vec<_> = (1..=window)
                    .map(|i| {
                        let (a, b) = (&pair[0], &pair[1]);
                        s.spawn(move || (1..=window).map(|j| entry_series_probe(a, b, i, j, params)).collect::<Vec<_>>())
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("probe thread panicked")).collect()
            });
            JunctionReport { index: idx + 1, junction, entries }
        })
        .collect()
}

pub fn report_to_json(reports: &[JunctionReport]) -> Value {
    Value::Array(reports.iter().map(JunctionReport::to_json).collect())
}
