//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Grid point counts must be powers of two with at least 8 points.
    #[error("n: grid size must be a power of two >= 8 (got {n})")]
    GridSize { n: usize },

    /// Sample vector length does not match the grid.
    #[error("values: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A sample is NaN or infinite.
    #[error("values: non-finite sample {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    /// Two operands live on different grids.
    #[error("grid mismatch: {left} vs {right} points")]
    GridMismatch { left: usize, right: usize },

    /// The solution (or an internal stage) dipped to or below the positivity
    /// floor; the equation degenerates as u -> 0 and the theory covered here
    /// assumes u > 0 throughout.
    #[error("positivity violation: min u = {min} <= floor {floor}")]
    PositivityViolation { min: f64, floor: f64 },

    /// |theta| reached pi/2, where tan(theta) = u_x/u blows up.
    #[error("slope blowup: |theta|_inf = {theta_linf} >= pi/2 - 1e-6")]
    SlopeBlowup { theta_linf: f64 },

    /// Constant input where a quotient of seminorms is required.
    #[error("degenerate input: constant density, inequality margin is 0 in the limit")]
    DegenerateInput,

    /// Balance residuals need at least three records to time-integrate.
    #[error("insufficient records: got {got}, need at least 3")]
    InsufficientRecords { got: usize },

    /// Preset parameters violate positivity or a stated constraint.
    #[error("invalid preset: {reason}")]
    InvalidPreset { reason: String },

    /// A model or solver parameter is out of range.
    #[error("{field}: {reason}")]
    InvalidParameter {
        field: &'static str,
        reason: String,
    },
}
