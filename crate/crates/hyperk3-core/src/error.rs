use alloc::string::String;
use core::fmt;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input violated a documented precondition; the message names it.
    Precondition(String),
    /// A cross-check between two independent computations disagreed.
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn bug(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::Inconsistent(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl core::error::Error for Error {}
