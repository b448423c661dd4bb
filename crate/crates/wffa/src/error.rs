use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value does not belong to the carrier of the semiring in use.
    #[error("value {value} is outside the {semiring} carrier")]
    Carrier { value: String, semiring: &'static str },

    /// A data value or parameter lies outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual input.
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The operation is not defined for the given semiring or input shape.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The operation needs a proper behavior (value 0 on the empty word).
    #[error("behavior is not proper: value on the empty word is {0}")]
    NotProper(String),

    /// A symbol is missing from the alphabet.
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),

    /// A state reference does not exist.
    #[error("unknown state `{0}`")]
    UnknownState(String),

    /// Two automata over different semirings were combined.
    #[error("semiring mismatch: {0} vs {1}")]
    SpecMismatch(String, String),

    /// An expression is not of the required class.
    #[error("classification error: {0}")]
    Classification(String),

    /// A regular expression contains a star over an improper subexpression.
    #[error("invalid regular expression: {0}")]
    InvalidRegex(String),

    /// File system failure.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for syntax problems in textual input.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
