use thiserror::Error;

use crate::numerics::QuadratureResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid qubit state: {0}")]
    InvalidState(String),

    #[error("non-physical channel kernel: |z| = {modulus} exceeds 1")]
    NonPhysicalKernel { modulus: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{0} diverges for a pointlike detector (radius = 0)")]
    PointlikeDivergence(&'static str),

    #[error(
        "quadrature did not converge: best estimate {} with error {} after {} evaluations",
        best.value, best.abs_error_estimate, best.evaluations
    )]
    QuadratureNotConverged { best: QuadratureResult },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("function is not strictly monotone on [{lo}, {hi}]")]
    NotMonotone { lo: f64, hi: f64 },

    #[error("target {target} outside attainable range [{min}, {max}]")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },

    #[error("Fock truncation at dimension {dim} not converged (deviation {deviation:e})")]
    TruncationNotConverged { dim: usize, deviation: f64 },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
