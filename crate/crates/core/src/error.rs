use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed braid word: {0}")]
    MalformedWord(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A chain group (or the whole computation) would not fit in the memory budget.
    #[error(
        "memory budget exceeded at bigrading (a={a}, b={b}): needs ~{needed_bytes} bytes \
         ({generators} generators), budget {budget_bytes} bytes"
    )]
    Budget {
        a: i32,
        b: i32,
        generators: u64,
        needed_bytes: u64,
        budget_bytes: u64,
    },

    #[error("diagram has {0} crossings, too many to enumerate its states")]
    TooLarge(usize),

    /// Signals a construction bug: d∘d ≠ 0, a parity violation, and the like.
    #[error("internal consistency error: {0}")]
    Internal(String),
}
