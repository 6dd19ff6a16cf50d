use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Syntax error from the expression / multivector-literal parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("{0}")]
    Domain(String),
    /// Malformed frame or matrix file.
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("`{name}` at byte {offset} takes {expected} argument(s), got {found}")]
    Arity { name: String, offset: usize, expected: String, found: usize },
    #[error("I/O error: {0}")]
    Io(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A failure while evaluating part of an expression.
    #[error("in `{expr}`: {source}")]
    Eval { expr: String, source: Box<Error> },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
