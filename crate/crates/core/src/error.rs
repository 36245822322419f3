use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A gauge failed construction or validation.
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    /// Bracketed inversion of g⁻¹ could not bracket the root.
    #[error("inversion of g^-1 at s = {s} failed: g^-1(hi = {hi}) = {value} < s")]
    Inversion { s: f64, hi: f64, value: f64 },

    /// Bad caller input: grid too short for the window, underflowing grid, ...
    #[error("usage error: {0}")]
    Usage(String),

    /// The requested value does not exist because the underlying limit did not converge.
    #[error("value unavailable: {0}")]
    Unavailable(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
