//! Two driven, exchange-coupled non-Hermitian qubits.
//!
//! Each qubit lives on `{|f⟩, |e⟩}` (index 0 = `|f⟩`), with
//! `σ⁻ = |e⟩⟨f|`, `σ⁺ = |f⟩⟨e|` and `σˣ = σ⁺ + σ⁻`. Two-qubit states use the
//! product ordering `[|ff⟩, |fe⟩, |ef⟩, |ee⟩]`, qubit 1 being the left factor.
//!
//! Angular frequencies are in rad/μs, rates in 1/μs and times in μs.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMat, ComplexVec4};

/// Basis labels in storage order.
pub const BASIS_LABELS: [&str; 4] = ["ff", "fe", "ef", "ee"];
pub const SINGLE_QUBIT_LABELS: [&str; 2] = ["f", "e"];

pub const FF: usize = 0;
pub const FE: usize = 1;
pub const EF: usize = 2;
pub const EE: usize = 3;

/// Physical parameters. Stored per qubit; the symmetric case is a choice
/// made through [`SystemParams::symmetric`], not a constraint of the type.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    #[serde(default)]
    pub delta1: f64,
    #[serde(default)]
    pub delta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub j: f64,
    #[serde(default)]
    pub alpha1: f64,
    #[serde(default)]
    pub alpha2: f64,
}

impl SystemParams {
    /// Identical qubits, resonant drive.
    pub fn symmetric(gamma: f64, omega: f64, j: f64) -> Self {
        Self {
            delta1: 0.0,
            delta2: 0.0,
            gamma1: gamma,
            gamma2: gamma,
            omega1: omega,
            omega2: omega,
            j,
            alpha1: 0.0,
            alpha2: 0.0,
        }
    }

    /// `J = 10 rad/μs`, `Ω = 1.6 rad/μs`, resonant, no relaxation.
    pub fn reference(gamma: f64) -> Self {
        Self::symmetric(gamma, 1.6, 10.0)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma1 = gamma;
        self.gamma2 = gamma;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega1 = omega;
        self.omega2 = omega;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha1 = alpha;
        self.alpha2 = alpha;
        self
    }

    /// Qubit labels exchanged.
    pub fn swapped(self) -> Self {
        Self {
            delta1: self.delta2,
            delta2: self.delta1,
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            omega1: self.omega2,
            omega2: self.omega1,
            j: self.j,
            alpha1: self.alpha2,
            alpha2: self.alpha1,
        }
    }

    pub fn fields(&self) -> [(&'static str, f64); 9] {
        [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("j", self.j),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in self.fields() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { field, reason: format!("{v} is not finite") });
            }
        }
        for (field, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidParameter { field, reason: format!("rate {v} is negative") });
            }
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `σ⁻ = |e⟩⟨f|`.
pub fn sigma_minus() -> ComplexMat {
    ComplexMat::from_real_rows([[0.0, 0.0], [1.0, 0.0]])
}

/// `σ⁺ = |f⟩⟨e|`.
pub fn sigma_plus() -> ComplexMat {
    ComplexMat::from_real_rows([[0.0, 1.0], [0.0, 0.0]])
}

pub fn sigma_x() -> ComplexMat {
    ComplexMat::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
}

/// Standard Pauli-y on `[|f⟩, |e⟩]`.
pub fn sigma_y() -> ComplexMat {
    ComplexMat::from_row_slice(2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
}

/// `(Δ − iγ/2)·σ⁺σ⁻ + Ω·σˣ` on `[|f⟩, |e⟩]`.
pub fn build_single_qubit_h(delta: f64, gamma: f64, omega: f64) -> ComplexMat {
    let number = &sigma_plus() * &sigma_minus();
    let damped = number.scale(c(delta, -0.5 * gamma));
    &damped + &sigma_x().scale_real(omega)
}

/// `H₁⊗I + I⊗H₂ + J(σ₁⁺σ₂⁻ + σ₁⁻σ₂⁺)`.
pub fn build_total_h(p: &SystemParams) -> Result<ComplexMat> {
    p.validate()?;
    let id = ComplexMat::identity(2);
    let h1 = build_single_qubit_h(p.delta1, p.gamma1, p.omega1);
    let h2 = build_single_qubit_h(p.delta2, p.gamma2, p.omega2);
    let local = &kron(&h1, &id)? + &kron(&id, &h2)?;
    let hop = &kron(&sigma_plus(), &sigma_minus())? + &kron(&sigma_minus(), &sigma_plus())?;
    Ok(&local + &hop.scale_real(p.j))
}

/// `[√α₁·σ⁻⊗I, √α₂·I⊗σ⁻]`, the `|f⟩ → |e⟩` relaxation channels.
pub fn build_jump_ops(p: &SystemParams) -> Result<Vec<ComplexMat>> {
    p.validate()?;
    let id = ComplexMat::identity(2);
    Ok(vec![
        kron(&sigma_minus(), &id)?.scale_real(p.alpha1.sqrt()),
        kron(&id, &sigma_minus())?.scale_real(p.alpha2.sqrt()),
    ])
}

/// Basis state by label (`"ff"`, `"fe"`, `"ef"`, `"ee"`).
pub fn basis_state(label: &str) -> Option<ComplexVec4> {
    let idx = BASIS_LABELS.iter().position(|l| l.eq_ignore_ascii_case(label))?;
    let mut v = [c(0., 0.); 4];
    v[idx] = c(1., 0.);
    Some(v)
}

/// Permutation exchanging the two qubits (swaps `|fe⟩` and `|ef⟩`).
pub fn swap_operator() -> ComplexMat {
    ComplexMat::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}
