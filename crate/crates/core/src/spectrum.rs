//! Complex spectrum of the two-qubit Hamiltonian: PT-phase labels,
//! exceptional-point location, phase diagrams and the eigen-expansion of
//! the dynamics.
//!
//! The unbroken phase is the one where all four eigenvalues share one
//! imaginary part; it is detected by the spread of imaginary parts falling
//! under a threshold. The exceptional point is located by bisecting on that
//! label, which is a sign condition and stays robust where the eigenvalue
//! gap itself is shallow and noisy.

use std::fmt;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{normalize, NormalizedState, StateVector, TimeGrid};
use crate::entanglement::{concurrence_pure, ConcurrenceValue};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, eig, ComplexMat, ComplexVec4, Lu};
use crate::model::{build_total_h, SystemParams};

/// Imaginary-part spread (rad/μs) under which the phase counts as unbroken.
pub const DEFAULT_PHASE_EPSILON: f64 = 1e-6;
/// Bisection stops once the γ bracket is narrower than this (1/μs).
pub const EP_BRACKET_WIDTH: f64 = 1e-6;
const MAX_BISECTIONS: usize = 200;
/// Eigen-expansions are refused above this eigenvector condition number.
pub const MAX_EXPANSION_CONDITION: f64 = 1e6;
/// Eigenstates with smaller coefficients do not take part in the dynamics.
pub const OVERLAP_CUTOFF: f64 = 1e-10;
/// Required lead of the slowest-decaying participating eigenstate.
pub const STEADY_STATE_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Unbroken,
    Broken,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Unbroken => "unbroken",
            Phase::Broken => "broken",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub phase: Phase,
    /// The imaginary-part spread the label was decided on.
    pub criterion: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub params: SystemParams,
    /// Ascending by (Re, Im).
    pub eigenvalues: [C64; 4],
    pub eigenvectors: [ComplexVec4; 4],
    pub residuals: [f64; 4],
    /// `max |Im λᵢ − Im λⱼ|`.
    pub max_im_spread: f64,
    /// `min |λᵢ − λⱼ|` over distinct pairs.
    pub min_gap: f64,
}

impl SpectrumResult {
    /// Spectrum of an explicit Hamiltonian; `params` is carried along only
    /// as a record.
    pub fn from_hamiltonian(params: SystemParams, h: &ComplexMat) -> Result<Self> {
        if h.dim() != 4 {
            return Err(Error::InvalidParameter { field: "hamiltonian", reason: "expected 4×4".into() });
        }
        let d = eig(h)?;
        let eigenvalues: [C64; 4] = d.eigenvalues.clone().try_into().unwrap();
        let eigenvectors: [ComplexVec4; 4] =
            [0, 1, 2, 3].map(|k| d.eigenvectors[k].clone().try_into().expect("4 components"));
        let residuals: [f64; 4] = d.residuals.clone().try_into().unwrap();

        let mut max_im_spread: f64 = 0.0;
        let mut min_gap = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                max_im_spread = max_im_spread.max((eigenvalues[i].im - eigenvalues[j].im).abs());
                min_gap = min_gap.min((eigenvalues[i] - eigenvalues[j]).norm());
            }
        }
        Ok(Self { params, eigenvalues, eigenvectors, residuals, max_im_spread, min_gap })
    }

    pub fn eigenvector_matrix(&self) -> ComplexMat {
        ComplexMat::from_fn(4, |i, j| self.eigenvectors[j][i])
    }

    /// Smallest `|Im λᵢ − Im λⱼ|` over distinct pairs.
    pub fn min_im_pair_gap(&self) -> f64 {
        let mut g = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                g = g.min((self.eigenvalues[i].im - self.eigenvalues[j].im).abs());
            }
        }
        g
    }
}

pub fn analyze(p: &SystemParams) -> Result<SpectrumResult> {
    SpectrumResult::from_hamiltonian(*p, &build_total_h(p)?)
}

pub fn classify_phase(s: &SpectrumResult, epsilon: f64) -> PhaseLabel {
    let phase = if s.max_im_spread < epsilon { Phase::Unbroken } else { Phase::Broken };
    PhaseLabel { phase, criterion: s.max_im_spread }
}

/// Phase of `template` with both loss rates set to `gamma`.
pub fn phase_at(template: &SystemParams, gamma: f64, epsilon: f64) -> Result<PhaseLabel> {
    Ok(classify_phase(&analyze(&template.with_gamma(gamma))?, epsilon))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpEstimate {
    /// Bracket midpoint, 1/μs.
    pub gamma: f64,
    /// Smallest eigenvalue separation at `gamma`; small near coalescence.
    pub min_gap: f64,
    pub iterations: usize,
    /// Final bracket.
    pub lo: f64,
    pub hi: f64,
}

/// Bisects on the phase label for the loss rate at which PT symmetry breaks.
///
/// `gamma_lo` must be unbroken and `gamma_hi` broken.
pub fn find_ep(template: &SystemParams, gamma_lo: f64, gamma_hi: f64) -> Result<EpEstimate> {
    find_ep_with(template, gamma_lo, gamma_hi, DEFAULT_PHASE_EPSILON)
}

pub fn find_ep_with(template: &SystemParams, gamma_lo: f64, gamma_hi: f64, epsilon: f64) -> Result<EpEstimate> {
    if !(gamma_lo.is_finite() && gamma_hi.is_finite() && gamma_lo >= 0.0 && gamma_lo < gamma_hi) {
        return Err(Error::InvalidBracket { lo: gamma_lo, hi: gamma_hi });
    }
    let lo_phase = phase_at(template, gamma_lo, epsilon)?.phase;
    let hi_phase = phase_at(template, gamma_hi, epsilon)?.phase;
    if lo_phase != Phase::Unbroken || hi_phase != Phase::Broken {
        return Err(Error::NoTransitionInBracket { lo: gamma_lo, hi: gamma_hi, lo_phase, hi_phase });
    }

    let (mut lo, mut hi) = (gamma_lo, gamma_hi);
    let mut iterations = 0;
    while hi - lo >= EP_BRACKET_WIDTH && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        match phase_at(template, mid, epsilon)?.phase {
            Phase::Unbroken => lo = mid,
            Phase::Broken => hi = mid,
        }
        iterations += 1;
    }
    let gamma = 0.5 * (lo + hi);
    let min_gap = analyze(&template.with_gamma(gamma))?.min_gap;
    Ok(EpEstimate { gamma, min_gap, iterations, lo, hi })
}

/// Inclusive, evenly spaced axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linspace {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Linspace {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        let s = Self { lo, hi, points };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo >= 0.0 && self.hi > self.lo) {
            return Err(Error::InvalidBracket { lo: self.lo, hi: self.hi });
        }
        if self.points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        let mut v: Vec<f64> = (0..self.points).map(|k| self.lo + k as f64 * step).collect();
        v[self.points - 1] = self.hi;
        v
    }
}

/// Phase labels over an (Ω, γ) grid plus sampled EP boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDiagram {
    pub omega: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Ω-major: cell `(i, j)` sits at `i * gamma.len() + j`. `None` marks a
    /// cell whose eigensolve failed.
    pub labels: Vec<Option<PhaseLabel>>,
    /// `(Ω, γ_EP)` per Ω column where a transition was bracketed.
    pub ep_boundary: Vec<(f64, f64)>,
}

impl PhaseDiagram {
    pub fn label(&self, i_omega: usize, i_gamma: usize) -> Option<PhaseLabel> {
        self.labels[i_omega * self.gamma.len() + i_gamma]
    }
}

/// Classifies every grid cell of `template` (with both Ω and both γ varied)
/// and traces the EP along each Ω column.
pub fn sweep_phase_diagram(template: &SystemParams, omega: Linspace, gamma: Linspace) -> Result<PhaseDiagram> {
    omega.validate()?;
    gamma.validate()?;
    let omegas = omega.values();
    let gammas = gamma.values();

    type Column = (Vec<Option<PhaseLabel>>, Option<(f64, f64)>);
    let columns: Vec<Column> = omegas
        .par_iter()
        .map(|&w| {
            let t = template.with_omega(w);
            let labels: Vec<Option<PhaseLabel>> =
                gammas.iter().map(|&g| phase_at(&t, g, DEFAULT_PHASE_EPSILON).ok()).collect();
            let boundary = column_boundary(&t, &gammas, &labels).map(|g| (w, g));
            (labels, boundary)
        })
        .collect();

    let mut labels = Vec::with_capacity(omegas.len() * gammas.len());
    let mut ep_boundary = Vec::new();
    for (col, b) in columns {
        labels.extend(col);
        ep_boundary.extend(b);
    }
    Ok(PhaseDiagram { omega: omegas, gamma: gammas, labels, ep_boundary })
}

fn column_boundary(template: &SystemParams, gammas: &[f64], labels: &[Option<PhaseLabel>]) -> Option<f64> {
    let phase = |k: usize| labels[k].map(|l| l.phase);
    let bracket = if phase(0) == Some(Phase::Broken) && gammas[0] > 0.0 {
        // lossless system is Hermitian, hence unbroken
        Some((0.0, gammas[0]))
    } else {
        (0..gammas.len() - 1)
            .find(|&k| phase(k) == Some(Phase::Unbroken) && phase(k + 1) == Some(Phase::Broken))
            .map(|k| (gammas[k], gammas[k + 1]))
    }?;
    find_ep(template, bracket.0, bracket.1).ok().map(|e| e.gamma)
}

/// `|ψ₀⟩ = Σₙ cₙ|λₙ⟩`, so that `|ψ(t)⟩ = Σₙ cₙ e^{−i Re(λₙ) t} e^{Im(λₙ) t}|λₙ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralExpansion {
    pub coefficients: [C64; 4],
    pub spectrum: SpectrumResult,
    /// One-norm condition number of the eigenvector matrix.
    pub condition: f64,
}

impl SpectralExpansion {
    pub fn from_hamiltonian(params: SystemParams, h: &ComplexMat, psi0: &StateVector) -> Result<Self> {
        let spectrum = SpectrumResult::from_hamiltonian(params, h)?;
        let v = spectrum.eigenvector_matrix();
        let condition = condition_number(&v);
        if !(condition < MAX_EXPANSION_CONDITION) {
            return Err(Error::NearExceptionalPoint { condition });
        }
        let c = Lu::new(&v)?.solve(&psi0.amplitudes);
        let coefficients: [C64; 4] = c.try_into().unwrap();
        Ok(Self { coefficients, spectrum, condition })
    }

    /// `Σₙ cₙ|λₙ⟩`.
    pub fn reconstruct(&self) -> ComplexVec4 {
        self.state_at(0.0).amplitudes
    }

    pub fn state_at(&self, t: f64) -> StateVector {
        let mut amps = [C64::new(0.0, 0.0); 4];
        for n in 0..4 {
            let lam = self.spectrum.eigenvalues[n];
            let w = self.coefficients[n] * C64::from_polar((lam.im * t).exp(), -lam.re * t);
            for (a, v) in amps.iter_mut().zip(&self.spectrum.eigenvectors[n]) {
                *a += w * v;
            }
        }
        StateVector { amplitudes: amps, time: t }
    }

    pub fn evolve(&self, grid: &TimeGrid) -> Vec<StateVector> {
        grid.times().iter().map(|&t| self.state_at(t)).collect()
    }

    /// Indices of eigenstates with `|cₙ| ≥` [`OVERLAP_CUTOFF`].
    pub fn participating(&self) -> Vec<usize> {
        (0..4).filter(|&n| self.coefficients[n].norm() >= OVERLAP_CUTOFF).collect()
    }

    /// The participating eigenstate with the largest `Im λ`, which dominates
    /// the renormalized state at long times.
    pub fn steady_state(&self) -> Result<NormalizedState> {
        let mut part = self.participating();
        part.sort_by(|&a, &b| self.spectrum.eigenvalues[b].im.total_cmp(&self.spectrum.eigenvalues[a].im));
        let Some(&best) = part.first() else {
            return Err(Error::NoUniqueSteadyState { margin: 0.0 });
        };
        if let Some(&second) = part.get(1) {
            let margin = self.spectrum.eigenvalues[best].im - self.spectrum.eigenvalues[second].im;
            if margin <= STEADY_STATE_MARGIN {
                return Err(Error::NoUniqueSteadyState { margin });
            }
        }
        normalize(&StateVector::new(self.spectrum.eigenvectors[best]))
    }
}

pub fn expand_initial_state(p: &SystemParams, psi0: &StateVector) -> Result<SpectralExpansion> {
    SpectralExpansion::from_hamiltonian(*p, &build_total_h(p)?, psi0)
}

/// Concurrence of the long-time state from `psi0`; defined in the broken phase only.
pub fn steady_state_concurrence(p: &SystemParams, psi0: &StateVector) -> Result<ConcurrenceValue> {
    steady_state_concurrence_of(*p, &build_total_h(p)?, psi0)
}

pub fn steady_state_concurrence_of(p: SystemParams, h: &ComplexMat, psi0: &StateVector) -> Result<ConcurrenceValue> {
    let expansion = SpectralExpansion::from_hamiltonian(p, h, psi0)?;
    if classify_phase(&expansion.spectrum, DEFAULT_PHASE_EPSILON).phase == Phase::Unbroken {
        return Err(Error::UnbrokenPhase);
    }
    Ok(concurrence_pure(&expansion.steady_state()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::basis_state;

    fn ff() -> StateVector {
        StateVector::new(basis_state("ff").unwrap())
    }

    #[test]
    fn hermitian_spectrum_is_real_and_unbroken() {
        for (w, j) in [(1.6, 10.0), (0.3, 2.0), (4.0, 0.5)] {
            let s = analyze(&SystemParams::symmetric(0.0, w, j)).unwrap();
            assert!(s.max_im_spread < 1e-10);
            assert_eq!(classify_phase(&s, 1e-9).phase, Phase::Unbroken);
        }
    }

    #[test]
    fn reference_points_on_both_sides() {
        let b = analyze(&SystemParams::reference(0.5)).unwrap();
        assert_eq!(classify_phase(&b, DEFAULT_PHASE_EPSILON).phase, Phase::Unbroken);
        let a = analyze(&SystemParams::reference(1.5)).unwrap();
        assert_eq!(classify_phase(&a, DEFAULT_PHASE_EPSILON).phase, Phase::Broken);
        let s = analyze(&SystemParams::reference(2.0)).unwrap();
        assert_eq!(classify_phase(&s, DEFAULT_PHASE_EPSILON).phase, Phase::Broken);
        let mut ims: Vec<f64> = s.eigenvalues.iter().map(|l| l.im).collect();
        ims.sort_by(f64::total_cmp);
        ims.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert!(ims.len() >= 2);
    }

    #[test]
    fn label_only_relaxes_with_larger_epsilon() {
        let s = analyze(&SystemParams::reference(1.2)).unwrap();
        let mut seen_unbroken = false;
        for k in -12..2 {
            let eps = 10f64.powi(k);
            let p = classify_phase(&s, eps).phase;
            if seen_unbroken {
                assert_eq!(p, Phase::Unbroken);
            }
            seen_unbroken |= p == Phase::Unbroken;
        }
        assert!(seen_unbroken);
    }

    #[test]
    fn ep_for_reference_parameters() {
        let ep = find_ep(&SystemParams::reference(0.0), 0.1, 3.0).unwrap();
        assert!((ep.gamma - 1.0).abs() <= 0.1, "{ep:?}");
        assert!(ep.hi - ep.lo < EP_BRACKET_WIDTH);
        assert!(ep.min_gap < 0.05, "{ep:?}");
    }

    #[test]
    fn ep_rises_with_drive() {
        let t = SystemParams::reference(0.0);
        let mut last = 0.0;
        for w in [0.8, 1.2, 1.6, 2.0] {
            let g = find_ep(&t.with_omega(w), 0.01, 5.0).unwrap().gamma;
            assert!(g > last, "Ω={w}: {g} ≤ {last}");
            last = g;
        }
    }

    #[test]
    fn invalid_brackets() {
        let t = SystemParams::reference(0.0);
        assert!(matches!(find_ep(&t, 1.5, 3.0), Err(Error::NoTransitionInBracket { .. })));
        assert!(matches!(find_ep(&t, 0.1, 0.5), Err(Error::NoTransitionInBracket { .. })));
        assert!(matches!(find_ep(&t, 3.0, 0.1), Err(Error::InvalidBracket { .. })));
        assert!(matches!(find_ep(&t, f64::NAN, 1.0), Err(Error::InvalidBracket { .. })));
    }

    #[test]
    fn expansion_of_an_eigenvector_is_a_single_term() {
        let p = SystemParams::reference(0.5);
        let s = analyze(&p).unwrap();
        let e = expand_initial_state(&p, &StateVector::new(s.eigenvectors[2])).unwrap();
        for (n, c) in e.coefficients.iter().enumerate() {
            let expect = if n == 2 { 1.0 } else { 0.0 };
            assert!((c.norm() - expect).abs() < 1e-10, "{n}: {c}");
        }
    }

    #[test]
    fn expansion_reconstructs_initial_state() {
        let e = expand_initial_state(&SystemParams::reference(0.5), &ff()).unwrap();
        let r = e.reconstruct();
        let target = basis_state("ff").unwrap();
        for (a, b) in r.iter().zip(&target) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn steady_state_requires_broken_phase() {
        assert!(matches!(
            steady_state_concurrence(&SystemParams::reference(0.5), &ff()),
            Err(Error::UnbrokenPhase)
        ));
    }

    #[test]
    fn steady_state_concurrence_descends_with_loss() {
        let mut last = f64::INFINITY;
        for k in 0..=18 {
            let g = 1.2 + 0.1 * k as f64;
            let c = steady_state_concurrence(&SystemParams::reference(g), &ff()).unwrap().value;
            assert!(c <= last, "γ={g}: {c} > {last}");
            last = c;
        }
    }

    #[test]
    fn zero_gamma_column_is_unbroken() {
        let d = sweep_phase_diagram(
            &SystemParams::reference(0.0),
            Linspace::new(0.2, 3.0, 5).unwrap(),
            Linspace::new(0.0, 3.0, 7).unwrap(),
        )
        .unwrap();
        for i in 0..5 {
            assert_eq!(d.label(i, 0).unwrap().phase, Phase::Unbroken);
        }
        assert_eq!(d.labels.len(), 35);
    }
}
