use thiserror::Error;

/// Errors raised by the word, substitution, language and balance layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("occurrences of the empty word are not counted")]
    EmptyPattern,

    #[error("length {requested} exceeds word length {len}")]
    OutOfRange { requested: usize, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("anchor condition violated: {0}")]
    AnchorViolated(String),

    #[error("block length m = {m} outside 1..={max}")]
    BlockLengthOutOfRange { m: usize, max: usize },

    #[error("no context words of length {0} to bound the block length")]
    EmptyContext(usize),

    #[error("inconsistent directive: {0}")]
    InconsistentDirective(String),

    #[error("invalid depth: {0}")]
    InvalidDepth(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("word is not representable as x sigma(y) z within the sample")]
    NotRepresentable,

    #[error("sample contains no non-empty word")]
    EmptySample,

    #[error("perron mode unavailable: {0}")]
    PerronUnavailable(String),

    #[error("unknown substitution {0:?}")]
    UnknownSubstitution(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
