//! Textual handles for series and matrices given on the command line.

use std::fmt;
use std::path::Path;

use lie_matrix::scalar::{parse_rational, Q};
use lie_matrix::series::{Builtin, InfiniteSeries};
use lie_matrix::{adjoint_handle, builtin_series, Error, GroupoidElement, InfiniteMatrixHandle, TruncatedMatrix};
use serde_json::Value;

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
    /// Divergence was detected where convergence was required.
    Divergent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Divergent(_) => 3,
            CliError::Core(e) => match e {
                Error::NonConvergence { .. } => 3,
                Error::GroupoidIncompatible { .. }
                | Error::SingularTruncation { .. }
                | Error::WitnessNotFound { .. }
                | Error::NotTriangular
                | Error::ZeroDiagonal { .. }
                | Error::JunctionNotPerformable { .. }
                | Error::RadiusViolation { .. }
                | Error::OutsideCertifiedArc { .. }
                | Error::SingularPath { .. }
                | Error::UndefinedProduct(_)
                | Error::UndefinedInverse(_)
                | Error::ReferencePath { .. } => 2,
                _ => 1,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Divergent(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<lie_matrix::ParseError> for CliError {
    fn from(e: lie_matrix::ParseError) -> Self {
        CliError::Core(e.into())
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn series_file(spec: &str) -> Option<&Path> {
    let p = Path::new(spec);
    p.is_file().then_some(p)
}

/// A builtin name (`geometric`, `translation:1/2`, …) or a series JSON file,
/// truncated to order `n`.
pub fn load_series(spec: &str, n: usize) -> Result<GroupoidElement<Q>, CliError> {
    match series_file(spec) {
        Some(path) => Ok(GroupoidElement::from_json(&read_json(path)?)?.truncate(n)?),
        None => Ok(builtin_series(&spec.parse::<Builtin>()?, n)?),
    }
}

/// Like [`load_series`] but keeps builtins infinite.
pub fn load_infinite_series(spec: &str) -> Result<InfiniteSeries<Q>, CliError> {
    match series_file(spec) {
        Some(path) => Ok(InfiniteSeries::polynomial(&GroupoidElement::from_json(&read_json(path)?)?)),
        None => Ok(InfiniteSeries::builtin(&spec.parse::<Builtin>()?)),
    }
}

/// `identity`, `carleman:<series>`, `translation:<q>`, `adjoint:<q>`, or a
/// matrix JSON file (zero outside the stored block).
pub fn load_handle(spec: &str) -> Result<InfiniteMatrixHandle<Q>, CliError> {
    if spec == "identity" {
        return Ok(InfiniteMatrixHandle::identity());
    }
    if let Some(rest) = spec.strip_prefix("carleman:") {
        return Ok(InfiniteMatrixHandle::carleman(&load_infinite_series(rest)?));
    }
    if let Some(rest) = spec.strip_prefix("translation:") {
        return Ok(InfiniteMatrixHandle::translation(parse_rational(rest)?));
    }
    if let Some(rest) = spec.strip_prefix("adjoint:") {
        return Ok(adjoint_handle(parse_rational(rest)?));
    }
    match series_file(spec) {
        Some(path) => Ok(InfiniteMatrixHandle::explicit(TruncatedMatrix::from_json(&read_json(path)?)?)),
        None => Err(CliError::Usage(format!("unrecognised matrix `{spec}`"))),
    }
}

/// `2,3,4` → `[2, 3, 4]`.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad index `{p}`"))))
        .collect()
}

/// `0.9,0.9,-0.3` → floats.
pub fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number `{p}`"))))
        .collect()
}
