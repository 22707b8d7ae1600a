use thiserror::Error;

use crate::fourier_core::Trajectory;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid of {grid} points aliases a field with max mode {max_mode} (need at least {required})")]
    Aliasing {
        grid: usize,
        max_mode: usize,
        required: usize,
    },

    #[error("dyadic parameter {0} is neither 0 nor a power of two")]
    NotDyadic(u64),

    #[error("negative-order Riesz potential applied to a field with nonzero mean")]
    SingularMode,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("max_mode mismatch: {0} vs {1}")]
    MismatchedModes(usize, usize),

    #[error("field is not Hermitian (not real-valued)")]
    NonHermitian,

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("trajectory is not uniformly sampled")]
    NonUniformSampling,

    #[error("trajectory time grids differ")]
    MismatchedTimes,

    #[error("trajectory carries no gauge phase data")]
    MissingAlpha,

    #[error("non-finite value at t = {t}")]
    BlowUp { t: f64, partial: Box<Trajectory> },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
