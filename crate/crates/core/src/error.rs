use core::fmt;

use crate::prelude::*;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong when building or combining forest presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed text; `pos` is a byte offset into the input.
    Syntax { pos: usize, msg: String },
    UnknownSymbol(String),
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    InvalidName(String),
    DuplicateSymbol(String),
    NoNullarySymbol,
    /// Two presentations that must share a signature do not.
    AlphabetMismatch,
    UnknownState(String),
    /// A precondition of an operation was violated.
    Precondition(String),
    NonLinearHomomorphism(String),
    /// Transducer composition requested outside the classes where it is closed.
    CompositionNotClosed,
    Invalid(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { pos, msg } => write!(f, "syntax error at offset {pos}: {msg}"),
            Error::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            Error::ArityMismatch {
                symbol,
                expected,
                found,
            } => write!(
                f,
                "arity mismatch: `{symbol}` has arity {expected} but was given {found} children"
            ),
            Error::InvalidName(s) => write!(f, "invalid symbol name `{s}`"),
            Error::DuplicateSymbol(s) => write!(f, "symbol `{s}` declared twice"),
            Error::NoNullarySymbol => f.write_str("alphabet has no nullary symbol"),
            Error::AlphabetMismatch => f.write_str("alphabet mismatch"),
            Error::UnknownState(s) => write!(f, "undeclared state `{s}`"),
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::NonLinearHomomorphism(s) => {
                write!(f, "homomorphism is not linear (symbol `{s}` copies a variable)")
            }
            Error::CompositionNotClosed => {
                f.write_str("composition not closed under these classes")
            }
            Error::Invalid(s) => f.write_str(s),
        }
    }
}

impl core::error::Error for Error {}
