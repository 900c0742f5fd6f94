use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Non-finite or out-of-domain argument to a numerical routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// Element spacing above half a wavelength.
    #[error("element spacing {spacing} λ exceeds the 0.5 λ Nyquist limit")]
    NyquistViolation { spacing: f64 },

    /// Aperture too small to hold more than one element.
    #[error("aperture {aperture} λ is smaller than one element spacing ({spacing} λ)")]
    DegenerateArray { aperture: f64, spacing: f64 },

    /// No closed form exists for the requested cut.
    #[error("unsupported cut: {0}")]
    UnsupportedCut(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
