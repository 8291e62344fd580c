use thiserror::Error;

/// Errors produced by the codec library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The word is not in the block set of the marker (not a ζ image).
    #[error("word is not a valid message block for this marker")]
    NotABlock,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("invalid marker: {0}")]
    Marker(String),

    #[error("block length {m} must exceed the window bound {bound}")]
    WindowBound { m: usize, bound: usize },

    #[error("field too large: 2^{degree} exceeds the block count {count}")]
    FieldTooLarge { degree: u32, count: String },

    #[error("decode failure: {0}")]
    Decode(#[from] DecodeFailure),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Reasons a received word could not be decoded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("root length {got} differs from {expected} but all markers are regularly spaced")]
    NoAnomaly { got: usize, expected: usize },

    #[error("length shift {delta} exceeds the window bound")]
    ShiftTooLarge { delta: isize },

    #[error("{0} blocks would be erased (at most 4 are recoverable)")]
    TooManyErasures(usize),

    #[error("outer code could not correct the received symbols")]
    Uncorrectable,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
