use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state amplitudes must be finite")]
    NonFinite,

    #[error("state norm {norm} deviates from 1 by more than {tol:e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("operator is not unitary (max deviation of U^dagger U from I is {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),

    #[error("expected a {expected}x{expected} density matrix, got {actual}x{actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("message block value {0} is outside 0..=3")]
    InvalidBlock(u8),

    #[error("probability {name}={value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("message has odd length {0}; messages are sent in 2-bit blocks")]
    OddLength(usize),

    #[error("message bit at position {position} is {value}, expected 0 or 1")]
    InvalidBit { position: usize, value: u8 },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
