//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, FrameError>;

/// Failure modes of frame construction and identity evaluation.
#[derive(Debug, Clone, Error)]
pub enum FrameError {
    /// Operand shapes are incompatible for the requested operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A scalar argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Structurally valid input that violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix required to be Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// An operator that must be invertible has an eigenvalue at or below
    /// the positivity threshold.
    #[error("singular operator: eigenvalue {eigenvalue:.3e} at or below threshold {threshold:.3e}")]
    Singular { eigenvalue: f64, threshold: f64 },

    /// An iterative decomposition did not converge.
    #[error("decomposition failed: {0}")]
    DecompositionFailed(&'static str),

    /// A frame required to be Parseval has bounds away from one.
    #[error("frame is not Parseval: bounds ({lower:.12}, {upper:.12})")]
    NotParseval { lower: f64, upper: f64 },

    /// A candidate dual fails the reconstruction identity.
    #[error("not an alternate dual: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotADual { residual: f64, tolerance: f64 },

    /// Input contains NaN or infinite entries.
    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
}
