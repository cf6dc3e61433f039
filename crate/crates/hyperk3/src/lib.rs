//! Command-line front end, text formats and the parallel scan driver for
//! `hyperk3-core`.

pub mod app;
pub mod grammar;
pub mod report;
pub mod scan;

pub use app::{run, Cli};
pub use grammar::{parse_poly, ParseError, Parsed, Variable};
pub use report::Report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<hyperk3_core::Error> for CliError {
    fn from(e: hyperk3_core::Error) -> Self {
        match e {
            hyperk3_core::Error::Precondition(m) => CliError::Precondition(m),
            hyperk3_core::Error::Inconsistent(m) => CliError::Internal(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}
