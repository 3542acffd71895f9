use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed text input. `pos` is a 1-based character column, or the
    /// 1-based line number for line-oriented formats.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Well-formed input that names something undeclared or is otherwise unusable.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The request is well-formed but the mathematics says no
    /// (not a solution, not a domain, trivial element, ...).
    #[error("{0}")]
    Domain(String),

    #[error("resource guard exceeded: {0}")]
    Guard(String),

    /// A checked invariant failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// CLI exit code: 2 for usage/parse problems, 1 for everything decided
    /// on mathematical grounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Invalid(_) | Error::Io(_) => 2,
            Error::Domain(_) | Error::Guard(_) | Error::Invariant(_) => 1,
        }
    }
}
