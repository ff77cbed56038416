use thiserror::Error;

/// Errors produced while building, loading, running or transforming machines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A token that is not part of the alphabet.
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    /// Caller broke an operation's precondition (wrong vector length, bad state index, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The machine description itself is malformed.
    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    /// Counter arithmetic left the i64 range.
    #[error("counter {counter} overflowed")]
    Overflow { counter: usize },

    /// The operation does not accept this machine variant.
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),

    /// Machines passed to a product construction disagree on their alphabets.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// Problems reading a serialized description.
    #[error("load error: {0}")]
    Load(String),

    /// An enumeration or table would exceed the configured budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An expression is not well formed.
    #[error("syntax error: {0}")]
    Syntax(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
