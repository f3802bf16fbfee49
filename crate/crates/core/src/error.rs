use thiserror::Error;

use crate::grid::Domain;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    GridSize(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("expected a {expected:?}-domain amplitude, got {found:?}")]
    WrongDomain { expected: Domain, found: Domain },

    #[error("amplitudes live on different grids or domains")]
    GridMismatch,

    #[error("amplitude is identically zero")]
    ZeroField,

    #[error("z samples must be uniform and ascend from 0")]
    NonUniformGrid,

    #[error("position {z} m is outside the sampled range [0, {max}] m")]
    OutOfRange { z: f64, max: f64 },

    #[error("signal and idler share the same group slowness; collision coordinates are undefined")]
    DegenerateWalkOff,

    #[error("gain calibration failed: {0}")]
    Calibration(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("singular value decomposition did not converge")]
    Svd,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
