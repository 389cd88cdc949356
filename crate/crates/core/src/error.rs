use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `x` has no inverse under the deformed addition at this `q`.
    #[error("singular element: {x} has no inverse under the q-addition with q = {q}")]
    SingularElement { x: f64, q: f64 },

    /// Input data failed validation (bad weights, mismatched lengths, malformed files).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    /// An iterative solver exhausted its budget without meeting the tolerance.
    #[error("convergence failure after {iterations} iterations (residual {residual:e} > tol {tol:e})")]
    ConvergenceFailure {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    #[error("resource limit: enumeration exceeded the budget of {budget} elements")]
    ResourceLimit { budget: usize },

    /// Log-log fit does not look like polynomial growth.
    #[error("fit rejected: rms residual {residual:.4} exceeds {threshold} (exponent estimate {exponent:.4})")]
    FitRejected {
        exponent: f64,
        residual: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
