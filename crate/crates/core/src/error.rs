use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system type {kind}{rank}")]
    InvalidType { kind: String, rank: usize },

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("coweight {0} is not dominant")]
    NotDominant(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration guard: {0} (set ADLV_GUARD_OVERRIDE=1 to lift)")]
    Guard(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A structural property that the algorithms rely on failed to hold.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}
