use thiserror::Error;

/// Errors raised by samplers, domain constructors and file I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("letter {0} is not in the automaton alphabet")]
    UnknownLetter(String),

    #[error("state space cannot be enumerated for this automaton")]
    UnsupportedDomain,

    #[error("bounding chain is stuck: no active letter left before coupling")]
    StuckChain,

    #[error("budget of {0} letters exhausted before coupling")]
    BudgetExhausted(u64),

    #[error("word letter {letter} is passive for the previous chain at position {position}")]
    InconsistentWord { letter: String, position: usize },

    #[error("enumeration guard: {vertices} vertices exceeds the limit of {limit}")]
    EnumerationGuard { vertices: usize, limit: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
