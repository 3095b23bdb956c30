use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Precondition violation on an argument (bad parameters, degree
    /// mismatch, non-prime modulus, and so on).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A prime cannot be used at this step (divides a structural
    /// denominator, or the reduction is not squarefree). Callers that
    /// iterate over primes skip and continue.
    #[error("ramified prime: {0}")]
    RamifiedPrime(String),

    /// Continued-fraction reconstruction found no rational within
    /// tolerance under the denominator bound.
    #[error("reconstruction failed: {0}")]
    ReconstructionFailed(String),

    /// Two conjugates coincide numerically at the working precision.
    #[error("conjugate collision: {0}")]
    ConjugateCollision(String),

    /// Coefficient rationalization still failed at the precision ceiling.
    #[error("rationalization failed at {bits} bits: {reason}")]
    RationalizationFailed { bits: u32, reason: String },

    /// The requested specialization point is a branch point of the family.
    #[error("branch point: {0}")]
    BranchPoint(String),

    /// A root modulo p whose valuation cannot be adjusted to exactly 1.
    #[error("degenerate root: {0}")]
    DegenerateRoot(String),

    /// Violation of an internal invariant; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
