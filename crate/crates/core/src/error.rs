use thiserror::Error;

/// Errors raised by parsing, construction and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("letter '{letter}' at offset {offset} is not in the alphabet")]
    UndeclaredLetter { letter: char, offset: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),

    #[error("({0}, {1}) is not a linked pair")]
    NotLinked(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by malformed input text.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UndeclaredLetter { .. } | Error::InvalidAlphabet(_)
        )
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Bounds on the exhaustive constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest transition-profile monoid that will be materialised.
    pub max_monoid: usize,
    /// Largest monomial degree explored by polynomial synthesis.
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_monoid: 5000,
            max_degree: 3,
        }
    }
}
