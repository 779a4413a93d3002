use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state has no weight in the symmetric subspace (leakage {leakage:.3e})")]
    NoSymmetricContent { leakage: f64 },

    #[error("Bessel evaluation outside validated range: order {order}, argument {arg}")]
    BesselRange { order: i32, arg: f64 },

    #[error("resonance condition not satisfied: {0}")]
    ResonanceNotSatisfied(String),

    #[error("step size underflow at t = {time:.12e} (h = {step:.3e})")]
    StepUnderflow { time: f64, step: f64 },

    #[error("operator is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("sweep failed: {failed} of {total} points failed")]
    SweepFailed { failed: usize, total: usize },

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
