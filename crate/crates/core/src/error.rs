use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not reach its tolerance.
    #[error("numeric error: {message}")]
    Numeric {
        message: String,
        /// Best available estimate at the point of failure, if any.
        best_estimate: Option<f64>,
    },

    /// An operation was applied to an object it does not accept.
    #[error("usage error: {0}")]
    Usage(String),

    /// A result violated an invariant that should hold by construction.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, best_estimate: Option<f64>) -> Self {
        Error::Numeric {
            message: msg.into(),
            best_estimate,
        }
    }
}
