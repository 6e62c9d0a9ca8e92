use thiserror::Error;

use crate::linalg::LinalgError;
use crate::spectrum::Phase;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("state has fully decayed (squared norm {norm_sq:.3e})")]
    FullyDecayed { norm_sq: f64 },
    #[error("integrator step size underflow after t = {last_good_time}")]
    StepUnderflow { last_good_time: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("bracket [{lo}, {hi}] is not a valid interval")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("no phase transition inside [{lo}, {hi}]: lower end is {lo_phase}, upper end is {hi_phase}")]
    NoTransitionInBracket { lo: f64, hi: f64, lo_phase: Phase, hi_phase: Phase },
    #[error("eigenvector basis is ill conditioned (condition number {condition:.3e}); too close to an exceptional point")]
    NearExceptionalPoint { condition: f64 },
    #[error("PT symmetry is unbroken; no single eigenstate dominates at long times")]
    UnbrokenPhase,
    #[error("slowest-decaying participating eigenstate is not unique (imaginary-part margin {margin:.3e})")]
    NoUniqueSteadyState { margin: f64 },
}
