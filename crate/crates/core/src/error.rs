use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ray configuration: {0}")]
    InvalidRay(String),

    #[error("invalid elliptic class: {0}")]
    InvalidClass(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: i64, max: i64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("Weyl group rank {rank} exceeds cap {cap}")]
    WeylCapExceeded { rank: usize, cap: usize },

    #[error("polynomial has a nonzero odd coefficient at degree {degree}")]
    NotEven { degree: usize },

    #[error("weight entry {0} is not an integer")]
    NonIntegralWeight(String),

    #[error("alternating sum depends on nu: {0}")]
    LemmaViolation(String),

    #[error("duplicate value {0}")]
    Duplicate(i64),

    #[error("negative integration bound {0}")]
    NegativeBound(i64),

    #[error("expected {expected} Plancherel coefficient lists, got {actual}")]
    PlancherelArity { expected: usize, actual: usize },

    #[error("non-positive argument: {0}")]
    NonPositive(String),

    #[error("insufficient samples in residue class {residue}: have {have}, need {need}")]
    InsufficientSamples {
        residue: usize,
        have: usize,
        need: usize,
    },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("exact evaluation unavailable: {0}")]
    Inexact(&'static str),
}
