//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QslError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid quantum state: {0}")]
    InvalidState(String),
    #[error("angle is undefined for a zero Bloch vector")]
    ZeroBlochVector,
    #[error("target angle must lie in (0, pi], got {0}")]
    ThetaOutOfRange(f64),
    #[error("spectrum is fully degenerate; no dynamics")]
    DegenerateSpectrum,
    #[error("energy gaps are incommensurable; evolution is aperiodic")]
    AperiodicEvolution,
    #[error("coefficient magnitude must lie in (0, 1/N], got {0}")]
    InvalidCoefficient(f64),
    #[error("no grid state reaches the target angle")]
    EmptySet,
    #[error("dynamics has no fixed point: {0}")]
    NoFixedPoint(String),
    #[error("quadrature failed to converge")]
    QuadratureNonConvergence,
    #[error("root bracketing failed: {0}")]
    BracketFailure(String),
    #[error("parameter outside the formula's domain: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, QslError>;
