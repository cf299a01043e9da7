use thiserror::Error;

/// Errors raised by the inference engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("option vectors must have at least one component")]
    EmptyVector,

    #[error("non-finite option component {0}")]
    NonFinite(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid assessment pair: {0}")]
    InvalidPair(String),

    /// The LP backend could not decide the problem (numerical trouble,
    /// iteration limit). Never to be read as "infeasible".
    #[error("linear feasibility solver failed: {0}")]
    Solver(String),

    #[error("oracle size limit exceeded: {0}")]
    OracleLimit(String),

    #[error("computation interrupted by deadline")]
    DeadlineExceeded,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
