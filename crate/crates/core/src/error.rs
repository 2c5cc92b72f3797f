use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("matrix is not symmetric (max asymmetry {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("imaginary part is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("forms live over different genera ({left} vs {right})")]
    GenusMismatch { left: usize, right: usize },
    #[error("scalar part of an even form must be exactly 1, found {0}")]
    NotUnitScalar(String),
    #[error("form has an odd-degree component")]
    OddComponent,
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("bad sample count {got} (need at least {min})")]
    BadSampleCount { got: usize, min: usize },
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("input map does not have rank one (rank {0})")]
    InputNotRankOne(usize),
    #[error("inputs are linearly dependent")]
    NotIndependent,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("map does not annihilate W (residual {0:e})")]
    NotInWperp(f64),
    #[error("invalid config field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("unknown suite `{0}`")]
    SuiteUnknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
