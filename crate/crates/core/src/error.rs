use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("alphabet mismatch: {0} letters vs {1} letters")]
    AlphabetMismatch(usize, usize),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("not a Lie element: associative remainder at word {0}")]
    NotLie(String),
    #[error("negative power of t after rescaling at degree {degree}")]
    NegativePower { degree: usize },
    #[error("unknown series name {0:?}")]
    UnknownSeries(String),
    #[error("unknown Lie algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("inconsistent linear system at degree {0}")]
    Inconsistent(usize),
    #[error("filtration cap {cap} exceeded (degree {degree})")]
    CapOverflow { cap: usize, degree: usize },
    #[error("truncation too low: need degree {required}, have {available}")]
    Truncation { required: usize, available: usize },
    #[error("element is not invariant: {0}")]
    NotInvariant(String),
    #[error("not a representation: {0}")]
    NotRepresentation(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
