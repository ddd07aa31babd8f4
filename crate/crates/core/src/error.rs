use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("saddle t_{k} did not converge after {iterations} iterations (last iterate {last})")]
    NoConvergence {
        k: i64,
        iterations: usize,
        last: Complex64,
    },

    #[error("saddle at {t} is too close to the double saddle t = -1")]
    DegenerateSaddle { t: Complex64 },

    #[error("expansion breaks down near mu = 1/e (mu = {mu})")]
    Coalescence { mu: f64 },

    #[error("truncation index {requested} exceeds available coefficients ({available})")]
    TruncationTooLarge { requested: usize, available: usize },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("large-z expansion is undefined at z = 0")]
    ZeroArgument,

    #[error("{context}: {message}")]
    Io { context: String, message: String },
}
