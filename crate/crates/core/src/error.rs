use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({0}, {1}) lies outside the open domain x1 > -23/240")]
    Domain(String, String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("two-point interpolation conditions fail between knots {0} and {1}")]
    InfeasibleData(usize, usize),

    #[error("interpolants do not match: {0}")]
    Mismatch(String),

    #[error("no feasible grid point found")]
    NoFeasiblePoint,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
