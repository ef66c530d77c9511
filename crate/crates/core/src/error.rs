use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration invariant does not hold. `tier` is zero-based.
    InvalidConfig {
        tier: Option<usize>,
        field: &'static str,
        reason: String,
    },
    /// An operation was called outside its domain (wrong tier count,
    /// exponents not (2, 4), hybrid layout violated, ...).
    Precondition(String),
    /// Adaptive quadrature ran out of subdivisions.
    NotConverged { value: f64, error_estimate: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig {
                tier: Some(k),
                field,
                reason,
            } => write!(f, "tier {}: field `{}`: {}", k + 1, field, reason),
            Error::InvalidConfig {
                tier: None,
                field,
                reason,
            } => write!(f, "field `{}`: {}", field, reason),
            Error::Precondition(msg) => write!(f, "precondition violated: {}", msg),
            Error::NotConverged {
                value,
                error_estimate,
            } => write!(
                f,
                "quadrature did not converge (value {:e}, error estimate {:e})",
                value, error_estimate
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(tier: Option<usize>, field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        tier,
        field,
        reason: reason.into(),
    }
}
