use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or iteration failed to reach the requested tolerance.
    /// Carries the best estimate obtained and the estimated error.
    #[error("convergence failure: {context} (best estimate {estimate}, error bound {error_bound})")]
    Convergence {
        context: String,
        estimate: f64,
        error_bound: f64,
    },

    /// A root-finding bracket does not contain the target value.
    #[error("bracket error: target {target} outside [{lo_value}, {hi_value}]")]
    Bracket {
        target: f64,
        lo_value: f64,
        hi_value: f64,
    },

    /// The requested method cannot handle this model configuration.
    #[error("capability error: {0}")]
    Capability(String),

    /// A series would need more terms than the configured ceiling.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Numerical transform inversion failed.
    #[error("inversion error: {0}")]
    Inversion(String),

    /// A comparison hypothesis does not hold for the supplied models.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    /// Invalid input such as mismatched model ingredients.
    #[error("input error: {0}")]
    Input(String),

    /// A model document failed to parse or validate.
    #[error("parse error: {0}")]
    Parse(String),

    /// I/O failure while reading specs or writing reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
