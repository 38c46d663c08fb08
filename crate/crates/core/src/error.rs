use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Unsupported request, e.g. a unit pair with no defined conversion.
    #[error("usage error: {0}")]
    Usage(String),

    /// Invalid sweep configuration; `field` names the offending config entry.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("sweep has {points} grid points, above the limit of {limit}; {suggestion}")]
    GuardExceeded {
        points: u128,
        limit: u128,
        suggestion: String,
    },

    /// The time grid is too coarse to resolve the evolution of the amplitude.
    #[error("grid resolution too coarse: {0}")]
    Resolution(String),

    /// The adaptive integrator could not make progress.
    #[error("integration failed at t = {last_good_time:e} s: {reason}")]
    Integration { last_good_time: f64, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
