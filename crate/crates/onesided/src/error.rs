/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An evaluation point lies outside the object's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument violates a precondition (bad degree, empty grid, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An integrand or model produced a non-finite value.
    #[error("evaluation produced a non-finite value at x = {x}")]
    NonFinite { x: f64 },

    /// A configuration value is unusable (vanishing weight, bad exponent, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The requested combination of parameters is not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The internal linear-program solver failed to reach an optimum.
    #[error("linear program failed: {0}")]
    LinearProgram(String),

    /// A constructed enclosure failed its independent dense-grid check.
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
