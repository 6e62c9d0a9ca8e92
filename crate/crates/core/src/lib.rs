//! Entanglement dynamics and PT-symmetry structure of two coupled, driven
//! non-Hermitian qubits.
//!
//! - [`model`]: Hamiltonian and jump operators from [`SystemParams`].
//! - [`dynamics`]: conditional pure-state and master-equation evolution.
//! - [`entanglement`]: pure- and mixed-state concurrence.
//! - [`spectrum`]: complex spectrum, PT phase, exceptional points.
//! - [`linalg`]: the small dense complex linear algebra underneath.

// `!(x > limit)` is used on purpose so that NaN lands on the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod model;
pub mod spectrum;

pub use dynamics::{
    evolve_master, evolve_pure, normalize, populations, DensityMatrix, Method, NormalizedState, StateVector,
    TimeGrid, Trajectory,
};
pub use entanglement::{concurrence_mixed, concurrence_pure, ConcurrenceValue, StateKind};
pub use error::{Error, Result};
pub use linalg::{ComplexMat, ComplexVec4};
pub use model::{basis_state, build_jump_ops, build_total_h, SystemParams};
pub use num_complex::Complex64;
pub use spectrum::{
    analyze, classify_phase, expand_initial_state, find_ep, steady_state_concurrence, sweep_phase_diagram,
    EpEstimate, Linspace, Phase, PhaseDiagram, PhaseLabel, SpectralExpansion, SpectrumResult,
};
