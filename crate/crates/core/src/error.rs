use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Scalar payloads are carried as `f64` regardless of the working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("density not integrable: {0}")]
    Integrability(String),
    #[error("accuracy target not met ({context}): best estimate {best} with error estimate {err_est}")]
    Accuracy { context: String, best: f64, err_est: f64 },
    #[error("malformed profile file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_accuracy(&self) -> bool {
        matches!(self, Error::Accuracy { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
