//! Conditional (no-jump) time evolution.
//!
//! Pure states follow `d|ψ⟩/dt = −iH|ψ⟩` with the non-Hermitian `H`, so the
//! norm decays and `‖ψ(t)‖²` is the probability that no decay has happened.
//! Mixed states follow the hybrid master equation whose trace plays the same
//! role. Observables are always taken on the renormalized state.
//!
//! Both propagators have two independent routes: the exact matrix
//! exponential (default, `H` is time independent) and adaptive Dormand–Prince.

mod rk;
mod superop;

pub use rk::{DormandPrince, Tolerances};
pub use superop::{jump_cache, liouvillian, master_rhs, unvectorize, vectorize};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence_mixed, concurrence_pure};
use crate::error::{Error, Result};
use crate::linalg::{eig, expm, propagator, vec_norm, ComplexMat, ComplexVec4};

/// Below this `‖ψ‖` a state cannot be renormalized.
pub const MIN_NORM: f64 = 1e-12;
/// Trajectories stop once `‖ψ‖²` or `Tr ρ` falls below this.
pub const DECAY_CUTOFF: f64 = 1e-12;

pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_SAMPLES: usize = 2001;

/// Fraction of the window, counted from the end, inspected for stabilization.
pub const STABLE_TAIL_FRACTION: f64 = 0.25;
/// Maximum `max − min` over the tail for a series to count as stabilized.
pub const STABLE_BAND: f64 = 0.05;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Exact,
    Rk,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Rk => "rk",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Method::Exact),
            "rk" => Ok(Method::Rk),
            other => Err(format!("unknown method `{other}` (expected `exact` or `rk`)")),
        }
    }
}

/// Sample times in μs: start at 0, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn uniform(t_max: f64, samples: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid(format!("t_max must be positive and finite, got {t_max}")));
        }
        if samples < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {samples}")));
        }
        let dt = t_max / (samples - 1) as f64;
        let mut times: Vec<f64> = (0..samples).map(|k| k as f64 * dt).collect();
        times[samples - 1] = t_max;
        Ok(Self { times })
    }

    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::InvalidGrid("grid must start at t = 0".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("sample times must be strictly increasing".into()));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_T_MAX, DEFAULT_SAMPLES).unwrap()
    }
}

/// Possibly unnormalized amplitudes over `[|ff⟩, |fe⟩, |ef⟩, |ee⟩]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: ComplexVec4,
    pub time: f64,
}

impl StateVector {
    pub fn new(amplitudes: ComplexVec4) -> Self {
        Self { amplitudes, time: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }
}

/// Unit-norm amplitudes `(α, β, ζ, η)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedState {
    amplitudes: ComplexVec4,
    time: f64,
}

impl NormalizedState {
    pub fn amplitudes(&self) -> &ComplexVec4 {
        &self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `|ψ̃⟩⟨ψ̃|`.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { entries: ComplexMat::outer(&self.amplitudes, &self.amplitudes), time: self.time }
    }
}

/// `|ψ⟩/‖ψ‖`; global phase untouched.
pub fn normalize(psi: &StateVector) -> Result<NormalizedState> {
    let norm = psi.norm();
    if !(norm > MIN_NORM) {
        return Err(Error::FullyDecayed { norm_sq: norm * norm });
    }
    let mut amplitudes = psi.amplitudes;
    amplitudes.iter_mut().for_each(|z| *z /= norm);
    Ok(NormalizedState { amplitudes, time: psi.time })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: ComplexMat,
    time: f64,
}

impl DensityMatrix {
    /// Checks shape and Hermiticity; positivity is checked where it matters.
    pub fn new(entries: ComplexMat, time: f64) -> Result<Self> {
        if entries.dim() != 4 {
            return Err(Error::InvalidDensityMatrix(format!("expected 4×4, got {0}×{0}", entries.dim())));
        }
        if !entries.is_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
        }
        let defect = entries.hermiticity_defect();
        if defect > 1e-9 * entries.norm_fro().max(1.0) {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {defect:.3e})")));
        }
        Ok(Self { entries, time })
    }

    pub fn pure(state: &NormalizedState) -> Self {
        state.to_density()
    }

    pub fn entries(&self) -> &ComplexMat {
        &self.entries
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// `ρ/Tr ρ`, projected onto the Hermitian part.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > DECAY_CUTOFF) {
            return Err(Error::FullyDecayed { norm_sq: tr });
        }
        let herm = (&self.entries + &self.entries.adjoint()).scale_real(0.5 / tr);
        Ok(Self { entries: herm, time: self.time })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let d = eig(&self.entries)?;
        Ok(d.eigenvalues.iter().map(|l| l.re).fold(f64::INFINITY, f64::min))
    }
}

/// Basis populations `(P₁, P₂, P₃, P₄)` of `|ff⟩, |fe⟩, |ef⟩, |ee⟩`.
pub trait Populations {
    fn populations(&self) -> [f64; 4];
}

impl Populations for NormalizedState {
    fn populations(&self) -> [f64; 4] {
        self.amplitudes.map(|z| z.norm_sqr())
    }
}

impl Populations for DensityMatrix {
    /// Diagonal of `ρ/Tr ρ`.
    fn populations(&self) -> [f64; 4] {
        let tr = self.trace();
        [0, 1, 2, 3].map(|k| self.entries[(k, k)].re / tr)
    }
}

pub fn populations<P: Populations>(state: &P) -> [f64; 4] {
    state.populations()
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrajectoryStates {
    Pure(Vec<NormalizedState>),
    Mixed(Vec<DensityMatrix>),
}

/// Why a trajectory stopped before the end of its grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    /// `‖ψ‖²` or `Tr ρ` fell below [`DECAY_CUTOFF`] at `time`.
    FullDecay { time: f64, survival: f64 },
}

/// Sampled evolution. All series have one entry per recorded sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// No-jump probability: `‖ψ‖²` for pure states, `Tr ρ` for mixed ones.
    pub survival: Vec<f64>,
    pub populations: Vec<[f64; 4]>,
    pub concurrence: Vec<f64>,
    /// Normalized states at each sample.
    pub states: TrajectoryStates,
    pub termination: Option<Termination>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `‖ψ‖` (or `√Tr ρ`).
    pub fn norms(&self) -> Vec<f64> {
        self.survival.iter().map(|p| p.sqrt()).collect()
    }

    pub fn population(&self, k: usize) -> Vec<f64> {
        self.populations.iter().map(|p| p[k]).collect()
    }

    pub fn max_concurrence(&self) -> f64 {
        self.concurrence.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Normalized samples as density matrices, whatever the trajectory kind.
    pub fn density_matrices(&self) -> Vec<DensityMatrix> {
        match &self.states {
            TrajectoryStates::Pure(s) => s.iter().map(NormalizedState::to_density).collect(),
            TrajectoryStates::Mixed(m) => m.clone(),
        }
    }
}

/// `max − min` over the last `fraction` of the samples.
pub fn tail_band(series: &[f64], fraction: f64) -> f64 {
    let tail = tail(series, fraction);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Mean over the last `fraction` of the samples.
pub fn tail_mean(series: &[f64], fraction: f64) -> f64 {
    let tail = tail(series, fraction);
    tail.iter().sum::<f64>() / tail.len() as f64
}

fn tail(series: &[f64], fraction: f64) -> &[f64] {
    assert!(!series.is_empty() && fraction > 0.0 && fraction <= 1.0);
    let keep = ((series.len() as f64 * fraction).ceil() as usize).clamp(1, series.len());
    &series[series.len() - keep..]
}

/// Stabilized in the sense of [`STABLE_BAND`] over [`STABLE_TAIL_FRACTION`].
pub fn is_stabilized(series: &[f64]) -> bool {
    tail_band(series, STABLE_TAIL_FRACTION) < STABLE_BAND
}

fn check_hamiltonian(h: &ComplexMat) -> Result<()> {
    if h.dim() != 4 {
        return Err(Error::InvalidParameter { field: "hamiltonian", reason: format!("expected 4×4, got {0}×{0}", h.dim()) });
    }
    if !h.is_finite() {
        return Err(Error::InvalidParameter { field: "hamiltonian", reason: "non-finite entries".into() });
    }
    Ok(())
}

/// Integrates `d|ψ⟩/dt = −iH|ψ⟩` from `psi0` (unit norm) over `grid`.
///
/// Stops early, with [`Termination::FullDecay`], once `‖ψ‖² < 10⁻¹²`.
pub fn evolve_pure(h: &ComplexMat, psi0: &StateVector, grid: &TimeGrid, method: Method) -> Result<Trajectory> {
    check_hamiltonian(h)?;
    let n0 = psi0.norm();
    if (n0 - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter { field: "initial_state", reason: format!("norm {n0} is not 1") });
    }

    let mut rec = Recorder::new(grid.len());
    match method {
        Method::Exact => {
            for &t in grid.times() {
                let u = propagator(h, t)?;
                let psi = u.mul_vec(&psi0.amplitudes);
                if !rec.push_pure(t, &psi)? {
                    break;
                }
            }
        }
        Method::Rk => {
            let minus_ih = h.scale(C64::new(0.0, -1.0));
            let f = |_t: f64, y: &[C64], dy: &mut [C64]| dy.copy_from_slice(&minus_ih.mul_vec(y));
            let mut rk = DormandPrince::new(f, 0.0, &psi0.amplitudes, Tolerances::default());
            for &t in grid.times() {
                rk.advance_to(t)?;
                let psi = rk.state().to_vec();
                if !rec.push_pure(t, &psi)? {
                    break;
                }
            }
        }
    }
    Ok(rec.finish_pure())
}

/// Integrates the conditional master equation from `rho0` (unit trace).
///
/// The exact route exponentiates the 16×16 Liouvillian per sample; the `rk`
/// route integrates the matrix form directly. Stops early once `Tr ρ < 10⁻¹²`.
pub fn evolve_master(
    h: &ComplexMat,
    jumps: &[ComplexMat],
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    method: Method,
) -> Result<Trajectory> {
    check_hamiltonian(h)?;
    let tr = rho0.trace();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDensityMatrix(format!("initial trace {tr} is not 1")));
    }
    let lmin = rho0.min_eigenvalue()?;
    if lmin < -1e-8 {
        return Err(Error::InvalidDensityMatrix(format!("initial state not positive (eigenvalue {lmin:.3e})")));
    }

    let v0 = vectorize(rho0.entries());
    let mut rec = Recorder::new(grid.len());
    match method {
        Method::Exact => {
            let l = liouvillian(h, jumps)?;
            for &t in grid.times() {
                let v = expm(&l, t)?.mul_vec(&v0);
                if !rec.push_mixed(t, &unvectorize(&v)?)? {
                    break;
                }
            }
        }
        Method::Rk => {
            let cache = jump_cache(jumps);
            let f = |_t: f64, y: &[C64], dy: &mut [C64]| {
                let rho = ComplexMat::from_row_slice(4, y).expect("16-component state");
                dy.copy_from_slice(master_rhs(h, &cache, &rho).as_slice());
            };
            let mut rk = DormandPrince::new(f, 0.0, &v0, Tolerances::default());
            for &t in grid.times() {
                rk.advance_to(t)?;
                if !rec.push_mixed(t, &unvectorize(rk.state())?)? {
                    break;
                }
            }
        }
    }
    Ok(rec.finish_mixed())
}

struct Recorder {
    times: Vec<f64>,
    survival: Vec<f64>,
    populations: Vec<[f64; 4]>,
    concurrence: Vec<f64>,
    pure: Vec<NormalizedState>,
    mixed: Vec<DensityMatrix>,
    termination: Option<Termination>,
}

impl Recorder {
    fn new(cap: usize) -> Self {
        Self {
            times: Vec::with_capacity(cap),
            survival: Vec::with_capacity(cap),
            populations: Vec::with_capacity(cap),
            concurrence: Vec::with_capacity(cap),
            pure: Vec::new(),
            mixed: Vec::new(),
            termination: None,
        }
    }

    /// Records one sample; `false` once the state has decayed away.
    fn push_pure(&mut self, t: f64, psi: &[C64]) -> Result<bool> {
        let survival: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(survival >= DECAY_CUTOFF) {
            self.termination = Some(Termination::FullDecay { time: t, survival });
            return Ok(false);
        }
        let amps: ComplexVec4 = psi.try_into().expect("4 amplitudes");
        let s = normalize(&StateVector { amplitudes: amps, time: t })?;
        self.times.push(t);
        self.survival.push(survival);
        self.populations.push(s.populations());
        self.concurrence.push(concurrence_pure(&s).value);
        self.pure.push(s);
        Ok(true)
    }

    fn push_mixed(&mut self, t: f64, rho: &ComplexMat) -> Result<bool> {
        let survival = rho.trace().re;
        if !(survival >= DECAY_CUTOFF) {
            self.termination = Some(Termination::FullDecay { time: t, survival });
            return Ok(false);
        }
        let dm = DensityMatrix { entries: rho.clone(), time: t }.normalized()?;
        self.times.push(t);
        self.survival.push(survival);
        self.populations.push(dm.populations());
        self.concurrence.push(concurrence_mixed(&dm)?.value);
        self.mixed.push(dm);
        Ok(true)
    }

    fn finish_pure(self) -> Trajectory {
        Trajectory {
            times: self.times,
            survival: self.survival,
            populations: self.populations,
            concurrence: self.concurrence,
            states: TrajectoryStates::Pure(self.pure),
            termination: self.termination,
        }
    }

    fn finish_mixed(self) -> Trajectory {
        Trajectory {
            times: self.times,
            survival: self.survival,
            populations: self.populations,
            concurrence: self.concurrence,
            states: TrajectoryStates::Mixed(self.mixed),
            termination: self.termination,
        }
    }
}
