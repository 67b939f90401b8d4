use thiserror::Error;

/// Errors raised by the simulator and controller library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Pitch is too close to ±π/2 for the Euler-rate transform to be finite.
    #[error("gimbal singularity: |theta| = {theta} is within the guard band of pi/2")]
    GimbalSingularity { theta: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// An operation that needs tag corners was given a non-detection.
    #[error("tag not detected")]
    NotDetected,
    #[error("invalid planner bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("trajectory log has too few records for this metric")]
    EmptyLog,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
