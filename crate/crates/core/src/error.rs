use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is out of range")]
    InvalidVertex(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("cannot pick a branch vertex from an empty candidate set")]
    EmptyCandidates,

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("instance too large for exhaustive enumeration: {0}")]
    BudgetExceeded(String),

    #[error("seed vertex {0} is not a member of the given set")]
    InvalidSeed(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("external solver: {0}")]
    Solver(String),

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
}

pub type Result<T> = std::result::Result<T, Error>;
