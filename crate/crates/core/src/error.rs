//! Crate-level error type for callers that drive the whole toolkit.

use std::path::PathBuf;

use thiserror::Error;

use crate::qaqp::VerifyError;
use crate::qsim::SimError;
use crate::semantics::{AutError, LinearizeError, SemanticsError};
use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("in term `{term}`: {source}")]
    Term {
        term: String,
        #[source]
        source: ParseError,
    },
    #[error("the document has no `init` and no term was given")]
    NoEntry,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Linearize(#[from] LinearizeError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error("exported .aut does not read back to the same LTS")]
    AutRoundTrip,
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
