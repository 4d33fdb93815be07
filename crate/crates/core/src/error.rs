use thiserror::Error;

/// Malformed textual or JSON input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed scalar: {0}")]
    BadScalar(String),
    #[error("unknown scalar domain `{0}`")]
    UnknownDomain(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("malformed JSON document: {0}")]
    BadDocument(String),
}

/// Failures raised by the algebraic and geometric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("coefficient list is empty")]
    EmptySeries,
    #[error("linear coefficient vanishes: not a groupoid element")]
    NotGroupoidElement,
    #[error("series of order {have} cannot supply order {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("groupoid incompatibility: target of inner ({inner_target}) differs from source of outer ({outer_source})")]
    GroupoidIncompatible { inner_target: String, outer_source: String },

    #[error("constant term {constant} lies outside the radius {radius} of `{stream}`")]
    RadiusViolation { stream: &'static str, constant: f64, radius: f64 },
    #[error("tail bound of `{stream}` could not reach {tol:e} within {budget} terms")]
    NonConvergence { stream: &'static str, tol: f64, budget: usize },

    #[error("truncation is singular: no pivot in column {column}")]
    SingularTruncation { column: usize },
    #[error("no pivot row for column {column} within row budget {budget}")]
    WitnessNotFound { column: usize, budget: usize },
    #[error("matrix is not triangular")]
    NotTriangular,
    #[error("zero diagonal entry at index {index}")]
    ZeroDiagonal { index: usize },
    #[error("invalid permutation prefix: {0}")]
    InvalidPermutation(String),
    #[error("block injection must be strictly increasing and positive")]
    InvalidInjection,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: &'static str, found: String },
    #[error("junction {index} cannot be performed: left factor is not lower and right factor is not upper triangular")]
    JunctionNotPerformable { index: usize },

    #[error("y = {y} is outside the certified arc |y| < pi/3")]
    OutsideCertifiedArc { y: f64 },

    #[error("segment passes within {clearance:e} of the puncture")]
    SingularPath { clearance: f64 },
    #[error("local product undefined: {0}")]
    UndefinedProduct(String),
    #[error("local inverse undefined: {0}")]
    UndefinedInverse(String),
    #[error("straight reference path to ({x}, {y}) meets the puncture")]
    ReferencePath { x: f64, y: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
