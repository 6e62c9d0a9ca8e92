//! Fixed-size dense complex linear algebra for 4×4 operators and 16×16
//! superoperators.

mod eig;
mod expm;
mod lu;
mod matrix;

pub use eig::{cmp_complex, eig, EigenDecomposition, RESIDUAL_TARGET};
pub use expm::{expm, expm_via_eig, propagator};
pub use lu::{condition_number, inverse, solve, Lu};
pub use matrix::{inner, kron, vec_norm, ComplexMat, ComplexVec4, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("QR iteration did not converge after {iterations} sweeps (subdiagonal residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("eigenvector matrix is ill conditioned (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },
    #[error("matrix exponential overflows (scaled norm {norm:.3e})")]
    Overflow { norm: f64 },
    #[error("non-finite input")]
    NonFinite,
}
