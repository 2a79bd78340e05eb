//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A buffer had a different length than the operation requires.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A numeric parameter violates its documented range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A signal failed construction-time validation.
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    /// A grid or sample index lies outside the addressed structure.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// The strongest grid cell does not stand out enough from the mean.
    #[error("no peak above dominance threshold ({dominance:.4} < {min_dominance:.4})")]
    NoSignificantPeak { dominance: f64, min_dominance: f64 },

    /// Every grid cell is exactly zero.
    #[error("spectrum carries no energy")]
    EmptySpectrum,

    /// Two configuration values that must agree do not.
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    /// The input has fewer samples than the operation supports.
    #[error("input too short: {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },

    /// An operation that scales by signal energy received an all-zero signal.
    #[error("signal has zero energy")]
    ZeroSignal,

    /// A sweep was configured with no methods to run.
    #[error("method set is empty")]
    EmptyMethodSet,
}
