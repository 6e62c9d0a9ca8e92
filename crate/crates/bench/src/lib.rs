//! Fixed inputs shared by the benchmarks.

use nhqubit::linalg::ComplexMat;
use nhqubit::{basis_state, build_jump_ops, build_total_h, normalize, DensityMatrix, StateVector, SystemParams};

/// Loss rates on either side of the exceptional point.
pub const GAMMAS: [f64; 3] = [0.5, 1.0, 1.5];

pub fn hamiltonian(gamma: f64) -> ComplexMat {
    build_total_h(&SystemParams::reference(gamma)).expect("finite parameters")
}

pub fn master_inputs(gamma: f64, alpha: f64) -> (ComplexMat, Vec<ComplexMat>, DensityMatrix) {
    let p = SystemParams::reference(gamma).with_alpha(alpha);
    let rho0 = normalize(&ground()).expect("unit state").to_density();
    (build_total_h(&p).unwrap(), build_jump_ops(&p).unwrap(), rho0)
}

pub fn ground() -> StateVector {
    StateVector::new(basis_state("ff").expect("label"))
}
