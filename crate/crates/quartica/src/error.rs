//! Error type shared by every module, with the CLI exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("elements belong to different fields (orders {0} and {1})")]
    FieldMismatch(u64, u64),

    #[error("embedding index {k} is not a unit modulo the field order {n}")]
    InvalidEmbedding { k: u64, n: u64 },

    #[error("no square root in the field (searched at {precision} bits, denominators up to 2^{denominator_bits})")]
    NoSquareRoot { precision: u32, denominator_bits: u32 },

    #[error("square-root reconstruction was inconclusive at {precision} bits; retry with more precision")]
    PrecisionExhausted { precision: u32 },

    #[error("line {name} is not a bitangent of the curve")]
    NotABitangent { name: String },

    #[error("square part of the restriction to {name} has a double root (fourth-order contact is unsupported)")]
    HyperflexContact { name: String },

    #[error("no square root in the working field for the leading coefficient of {context}")]
    NoSquareRootInField { context: String },

    #[error("lines {i} and {j} coincide")]
    DuplicateLine { i: String, j: String },

    #[error("lines {i} and {j} meet on the quartic; the pairing is undefined there")]
    OnBranchLocus { i: String, j: String },

    #[error("sections on {i} and {j} are neither equal nor opposite where the lines meet; the section data is inconsistent")]
    Inconsistent { i: String, j: String },

    #[error("malformed sign matrix: {0}")]
    MalformedMatrix(String),

    #[error("identity violated (implementation bug): {0}")]
    IdentityViolated(String),

    #[error("numeric search found {found} lines where {expected} were expected")]
    ConvergenceShortfall { found: usize, expected: usize },

    #[error("ambiguous sheet match between lines {i} and {j} at tolerance {tol:e}; rerun with more precision")]
    AmbiguousMatch { i: String, j: String, tol: f64 },

    #[error("no sheet match between lines {i} and {j} at tolerance {tol:e}")]
    MatchFailure { i: String, j: String, tol: f64 },

    #[error("{total} subsets exceed the enumeration limit {limit}")]
    LimitExceeded { total: u128, limit: u64 },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 2 for usage and schema problems, 1 for domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema { .. } | Error::InvalidInput(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
