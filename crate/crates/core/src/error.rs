use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unphysical Bloch vector: norm {norm} exceeds the unit ball")]
    UnphysicalState { norm: f64 },

    #[error("expected a unit Bloch vector, got norm {norm}")]
    NotUnitVector { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{name} = {value} must be non-negative")]
    Negative { name: &'static str, value: f64 },

    #[error("recovery channel {index} is not completely positive")]
    NotCompletelyPositive { index: usize },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("{what}: got {got}, need at least {min}")]
    TooFew {
        what: &'static str,
        got: usize,
        min: usize,
    },

    #[error("invalid alpha range [{min}, {max}]")]
    InvalidRange { min: f64, max: f64 },

    #[error("no kink found in alpha range [{min}, {max}]")]
    NoKinkFound { min: f64, max: f64 },

    #[error("at alpha = {alpha}: {source}")]
    AtAlpha { alpha: f64, source: Box<Error> },
}

pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    if value >= min && value <= max {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}
