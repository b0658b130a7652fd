use thiserror::Error;

/// Errors raised by every fallible operation of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid input: shape mismatch, unsupported field, violated precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration would exceed its configured guard.
    #[error("resource guard exceeded: {what} needs {count} items, guard is {guard}")]
    Resource {
        what: String,
        count: u128,
        guard: u128,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, count: u128, guard: u128) -> Self {
        Error::Resource {
            what: what.into(),
            count,
            guard,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
