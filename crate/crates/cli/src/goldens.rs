//! Transcribed matrix blocks checked against freshly computed ones.

use lie_matrix::scalar::{parse_rational, qi, Q};
use lie_matrix::series::{Builtin, InfiniteSeries};
use lie_matrix::InfiniteMatrixHandle;
use serde_json::{json, Value};

/// An entry whose printed value disagrees with the series expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    /// 1-based.
    pub row: usize,
    pub col: usize,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub reason: &'static str,
}

#[derive(Clone, Debug)]
pub struct GoldenFixture {
    pub name: &'static str,
    pub builtin: Builtin,
    /// Expected block, row-major, with corrections already applied.
    pub expected: Vec<Vec<&'static str>>,
    pub corrections: Vec<Correction>,
}

impl GoldenFixture {
    pub fn rows(&self) -> usize {
        self.expected.len()
    }

    pub fn cols(&self) -> usize {
        self.expected.first().map_or(0, Vec::len)
    }

    pub fn computed(&self) -> Vec<Vec<Q>> {
        InfiniteMatrixHandle::carleman(&InfiniteSeries::builtin(&self.builtin)).window(self.rows(), self.cols())
    }

    pub fn verify(&self) -> FixtureResult {
        let got = self.computed();
        let mut mismatches = Vec::new();
        for (r, row) in self.expected.iter().enumerate() {
            for (c, want) in row.iter().enumerate() {
                let want = parse_rational(want).expect("fixture entries are rationals");
                if got[r][c] != want {
                    mismatches.push(Mismatch { row: r + 1, col: c + 1, expected: want, found: got[r][c].clone() });
                }
            }
        }
        FixtureResult { name: self.name, rows: self.rows(), cols: self.cols(), mismatches, corrections: self.corrections.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub expected: Q,
    pub found: Q,
}

#[derive(Clone, Debug)]
pub struct FixtureResult {
    pub name: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub mismatches: Vec<Mismatch>,
    pub corrections: Vec<Correction>,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let status = if self.passed() { "ok" } else { "FAILED" };
        let mut out = vec![format!("{} {}x{} {status}", self.name, self.rows, self.cols)];
        for m in &self.mismatches {
            out.push(format!("  ({},{}): expected {}, computed {}", m.row, m.col, m.expected, m.found));
        }
        for c in &self.corrections {
            out.push(format!(
                "  notice: ({},{}) printed as {}, fixture holds {} ({})",
                c.row, c.col, c.printed, c.corrected, c.reason
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "rows": self.rows,
            "cols": self.cols,
            "passed": self.passed(),
            "mismatches": self.mismatches.iter().map(|m| json!({
                "row": m.row, "col": m.col,
                "expected": m.expected.to_string(), "found": m.found.to_string(),
            })).collect::<Vec<_>>(),
            "oracle_corrected": self.corrections.iter().map(|c| json!({
                "row": c.row, "col": c.col, "printed": c.printed, "value": c.corrected,
            })).collect::<Vec<_>>(),
        })
    }
}

fn grid(rows: &[&[&'static str]]) -> Vec<Vec<&'static str>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

pub fn fixtures() -> Vec<GoldenFixture> {
    vec![
        GoldenFixture {
            name: "M_g",
            builtin: Builtin::Geometric,
            expected: grid(&[
                &["1", "0", "0", "0", "0", "0", "0"],
                &["1", "-1", "1", "-1", "1", "-1", "1"],
                &["1", "-2", "3", "-4", "5", "-6", "7"],
                &["1", "-3", "6", "-10", "15", "-21", "28"],
                &["1", "-4", "10", "-20", "35", "-56", "84"],
                &["1", "-5", "15", "-35", "70", "-126", "210"],
            ]),
            corrections: vec![],
        },
        GoldenFixture {
            name: "M_tau",
            builtin: Builtin::Translation(qi(1)),
            expected: grid(&[
                &["1", "0", "0", "0", "0", "0", "0"],
                &["1", "1", "0", "0", "0", "0", "0"],
                &["1", "2", "1", "0", "0", "0", "0"],
                &["1", "3", "3", "1", "0", "0", "0"],
                &["1", "4", "6", "4", "1", "0", "0"],
                &["1", "5", "10", "10", "5", "1", "0"],
            ]),
            corrections: vec![],
        },
        GoldenFixture {
            name: "M_h",
            builtin: Builtin::H,
            expected: grid(&[
                &["1", "0", "0", "0", "0", "0", "0"],
                &["0", "-1", "1", "-1", "1", "-1", "1"],
                &["0", "0", "1", "-2", "3", "-4", "5"],
                &["0", "0", "0", "-1", "3", "-6", "10"],
                &["0", "0", "0", "0", "1", "-4", "10"],
                &["0", "0", "0", "0", "0", "-1", "5"],
            ]),
            corrections: vec![],
        },
        GoldenFixture {
            name: "LN",
            builtin: Builtin::Ln1p,
            expected: grid(&[
                &["1", "0", "0", "0", "0"],
                &["0", "1", "-1/2", "1/3", "-1/4"],
                &["0", "0", "1", "-1", "11/12"],
                &["0", "0", "0", "1", "-3/2"],
                &["0", "0", "0", "0", "1"],
            ]),
            corrections: vec![],
        },
        GoldenFixture {
            name: "EXP0",
            builtin: Builtin::Expm1,
            expected: grid(&[
                &["1", "0", "0", "0", "0"],
                &["0", "1", "1/2", "1/6", "1/24"],
                &["0", "0", "1", "1", "7/12"],
                &["0", "0", "0", "1", "3/2"],
                &["0", "0", "0", "0", "1"],
            ]),
            corrections: vec![Correction {
                row: 3,
                col: 5,
                printed: "4/3",
                corrected: "7/12",
                reason: "(e^z - 1)^2 has z^4 coefficient (2^4 - 2)/4! = 7/12; printed value suspected typo",
            }],
        },
    ]
}

pub fn verify_all() -> Vec<FixtureResult> {
    fixtures().iter().map(GoldenFixture::verify).collect()
}
