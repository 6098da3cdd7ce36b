use thiserror::Error;

/// Errors raised by constructions, verifications and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Malformed or out-of-domain input (non-Hermitian matrix, non-unitary
    /// gate, invalid branch, Bloch vector outside the ball, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The caller broke a documented precondition (missing gains,
    /// non-commuting exponent generators, wrong class kind).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The commuting-partner formula divides by the σ₃ coefficient; use the
    /// rotated-frame construction `machines::commuting_machine` instead.
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    #[error("degenerate spectrum: observable has a single eigenvalue {0}")]
    DegenerateSpectrum(f64),

    #[error("singular angle θ = {0}: gain 1/cos θ or 1/sin θ is unbounded")]
    SingularAngle(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
