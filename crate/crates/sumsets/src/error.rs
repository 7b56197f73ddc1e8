//! Library error type.

use thiserror::Error;

/// Errors produced by library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An element payload does not belong to the model it is used with.
    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    /// A model descriptor violates its own invariants.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An operation requiring a finite model was called on an infinite one.
    #[error("operation `{0}` requires a finite model")]
    InfiniteModel(&'static str),

    /// An operation requiring an abelian model was called on a nonabelian one.
    #[error("operation `{0}` requires an abelian model")]
    NonAbelianModel(&'static str),

    /// A cyclic modulus that must be prime is not.
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    /// The given set is not a subgroup.
    #[error("set is not a subgroup: {0}")]
    NotSubgroup(String),

    /// The selection size ℓ is outside `1 ≤ ℓ ≤ m`.
    #[error("selection size ell={ell} out of range for sequence length m={m}")]
    EllOutOfRange { ell: usize, m: usize },

    /// A configured work budget was exceeded (distinct from a negative result).
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A progression type realizes fewer distinct elements than its length.
    #[error("progression collision: {0}")]
    ProgressionCollision(String),

    /// Progression types passed together do not share one ratio.
    #[error("mismatched progression ratios")]
    MismatchedRatios,

    /// Invalid construction or generator parameters.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Malformed JSON input.
    #[error("json: {0}")]
    Json(String),

    /// An internal invariant that the library itself guarantees failed.
    /// Seeing this error is a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Convenience alias used across the library.
pub type Result<T> = std::result::Result<T, Error>;
