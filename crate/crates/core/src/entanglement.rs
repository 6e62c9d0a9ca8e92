//! Two-qubit concurrence.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{DensityMatrix, NormalizedState};
use crate::error::{Error, Result};
use crate::linalg::{eig, kron, ComplexMat};
use crate::model::sigma_y;

/// Tolerated negative eigenvalue of an input density matrix.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Eigenvalues of `R` at or below this (relative to the largest) are
/// indistinguishable from zero at double precision and are set to zero
/// before square roots are taken.
pub const SPECTRUM_NOISE_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub kind: StateKind,
}

/// `2|αη − βζ|`.
pub fn concurrence_pure(s: &NormalizedState) -> ConcurrenceValue {
    let [a, b, z, e] = *s.amplitudes();
    let value = (2.0 * (a * e - b * z).norm()).clamp(0.0, 1.0);
    ConcurrenceValue { value, kind: StateKind::Pure }
}

/// `σʸ ⊗ σʸ` on the two-qubit basis.
pub fn spin_flip() -> ComplexMat {
    let y = sigma_y();
    kron(&y, &y).expect("4×4")
}

/// `R = ρ(σʸ⊗σʸ)ρ*(σʸ⊗σʸ)` with entrywise conjugation.
pub fn wootters_matrix(rho: &ComplexMat) -> ComplexMat {
    let yy = spin_flip();
    let flipped = &(&yy * &rho.conj()) * &yy;
    rho * &flipped
}

/// Eigenvalues of `R`, clamped to non-negative reals and sorted descending.
pub fn wootters_spectrum(rho: &ComplexMat) -> Result<[f64; 4]> {
    let d = eig(&wootters_matrix(rho))?;
    let mut lam: Vec<f64> = d.eigenvalues.iter().map(|l| l.re).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    let floor = SPECTRUM_NOISE_FLOOR * lam[0].max(1.0);
    Ok([0, 1, 2, 3].map(|k| if lam[k] <= floor { 0.0 } else { lam[k] }))
}

/// `max{√Λ₁ − √Λ₂ − √Λ₃ − √Λ₄, 0}` for a unit-trace density matrix.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<ConcurrenceValue> {
    let m = rho.entries();
    let tr = m.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-6 {
        return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
    }
    let lmin = rho.min_eigenvalue()?;
    if lmin < -PSD_TOLERANCE {
        return Err(Error::InvalidDensityMatrix(format!("not positive semidefinite (eigenvalue {lmin:.3e})")));
    }
    let lam = wootters_spectrum(m)?;
    let s = lam.map(f64::sqrt);
    let value = (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceValue { value, kind: StateKind::Mixed })
}
