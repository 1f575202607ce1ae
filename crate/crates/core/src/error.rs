use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are coarse on purpose: callers (the CLI, the C ABI) map them
/// onto exit codes and status codes, so each one names a category of failure
/// rather than an individual call site.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A real input sits so close to a Farey fraction that the working
    /// precision cannot decide which side it lies on.
    #[error(
        "ambiguous input: {x} is within {distance:e} of {a}/{q} at {precision} bits; \
         pass an exact value or raise --precision"
    )]
    Ambiguous {
        x: f64,
        a: u64,
        q: u64,
        distance: f64,
        precision: u32,
    },

    #[error("{a} has no inverse modulo {q}")]
    NoInverse { a: i64, q: i64 },

    /// Malformed textual input. `pos` is a byte offset into the input.
    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    /// Structurally invalid input (bad permutation, bad lengths, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// An internal cross-check failed: a computed object violated an
    /// invariant it must satisfy.
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
