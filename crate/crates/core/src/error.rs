use thiserror::Error;

/// Failures raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer {0}")]
    Pole(String),

    #[error("series did not converge within {max_terms} terms (argument {argument})")]
    TermBudgetExceeded { max_terms: usize, argument: String },

    #[error("invalid hypergeometric parameters: {0}")]
    InvalidParams(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("tolerance {tolerance:e} not met: {detail}")]
    ToleranceNotMet { tolerance: f64, detail: String },

    #[error("contour abscissa {gamma_line} does not separate poles: {detail}")]
    Contour { gamma_line: f64, detail: String },

    #[error("invalid precision context: {0}")]
    InvalidContext(String),
}

pub type Result<T> = std::result::Result<T, Error>;
