use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("domain error: {value} outside [0, 1)")]
    Domain { value: f64 },

    #[error("derivative undefined at breakpoint x = {x}")]
    UndefinedDerivative { x: f64 },

    #[error("conditioning slice {index} carries zero mass")]
    EmptySlice { index: usize },

    #[error("series '{0}' not found")]
    SeriesNotFound(String),

    #[error("joint alphabet of {required} cells exceeds budget of {budget}; coarsen the mesh")]
    CapacityExceeded { required: usize, budget: usize },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
