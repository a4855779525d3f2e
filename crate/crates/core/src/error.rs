use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("function-evaluation budget exhausted")]
    BudgetExhausted,
    #[error("objective returned a non-finite value")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("slope of the Armijo term must be strictly negative, got {0}")]
    DegenerateSlope(f64),
    #[error("no acceptable step within {0} backtracking steps")]
    LineSearchFailure(u32),
    #[error("gradient is exactly zero")]
    ZeroGradient,
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("iteration bound is not defined for theta = 1")]
    ThetaOne,
    #[error("problem ({function}, {start}) has no record for method {method}")]
    MissingProblem {
        function: String,
        start: u32,
        method: String,
    },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
