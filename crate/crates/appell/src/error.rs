use thiserror::Error;

/// Errors shared across the crate. Exact arithmetic never loses precision, so
/// every failure here is structural: mismatched dimensions, a series used past
/// its truncation order, or an operator applied outside its stated domain.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} exceeds the supported maximum {1}")]
    DimensionTooLarge(usize, usize),

    #[error("blade index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("mesh width must be positive, got {0}")]
    InvalidMesh(String),

    #[error("series domain error: {0}")]
    SeriesDomain(String),

    #[error("series truncated at order {available}, but order {required} is required")]
    SeriesOrder { required: usize, available: usize },

    #[error("operator is not degree-lowering on {witness}")]
    NotDegreeLowering { witness: String },

    #[error("operator does not preserve the degree-{degree} truncation; witness {witness}")]
    NotDegreePreserving { degree: usize, witness: String },

    #[error("matrix is not unipotent: {0}")]
    NotUnipotent(String),

    #[error("series did not converge within {limit} terms")]
    TermLimit { limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
