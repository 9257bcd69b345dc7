use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: expected {expected}")]
    SyntaxError {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("Bottom is not supported: {0}")]
    BottomNotSupported(String),
    #[error("invalid name {0:?}: names are non-empty over [A-Za-z0-9_]")]
    InvalidName(String),
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("unknown element {0}")]
    UnknownElement(usize),
    #[error("ontology is not in normal form: {0}")]
    NotNormalized(String),
    #[error("axiom is not in normal form: {0}")]
    NotNormalFormAxiom(String),
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("name {0:?} is absent from the embedding index")]
    SignatureMismatch(String),
    #[error("domain too small: need at least {need}, got {got}")]
    DomainTooSmall { need: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
