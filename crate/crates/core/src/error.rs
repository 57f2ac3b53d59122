use thiserror::Error;

use crate::hypergraph::ValidationReport;

/// Errors produced by the library.
///
/// The CLI maps [`Error::Parse`] to exit code 2 and everything else to exit
/// code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(ValidationReport),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size budget exceeded: {what} needs {required}, budget is {budget}")]
    Budget {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("no degree-preserving substitution exists for this function (searched {searched})")]
    NoDegreePreservingSubstitution { searched: usize },

    #[error("not a clique: {0}")]
    NotAClique(String),

    #[error("no valid clique exists")]
    NoClique,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
