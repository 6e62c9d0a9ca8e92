//! Scenario files and command-line overrides.

use std::path::{Path, PathBuf};

use nhqubit::{basis_state, Complex64 as C64, Method, StateVector, SystemParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    /// Human-readable report; `ep` only.
    Text,
}

/// Either a basis label (`"ff"`, `"fe"`, `"ef"`, `"ee"`) or four `[re, im]` amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Label(String),
    Amplitudes([[f64; 2]; 4]),
}

impl InitialState {
    pub fn to_state(&self) -> Result<StateVector, CliError> {
        let amps = match self {
            InitialState::Label(l) => basis_state(l)
                .ok_or_else(|| CliError::Config(format!("initial_state: unknown basis label `{l}` (expected ff, fe, ef or ee)")))?,
            InitialState::Amplitudes(a) => a.map(|[re, im]| C64::new(re, im)),
        };
        let psi = StateVector::new(amps);
        let n = psi.norm();
        if !n.is_finite() || (n - 1.0).abs() > 1e-6 {
            return Err(CliError::Config(format!("initial_state: norm {n} is not 1 within 1e-6")));
        }
        Ok(psi)
    }
}

/// γ sweep for `spectrum`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSweep {
    pub gamma_range: [f64; 2],
    pub gamma_points: usize,
}

impl Default for SpectrumSweep {
    fn default() -> Self {
        Self { gamma_range: [0.0, 3.0], gamma_points: 301 }
    }
}

/// (Ω, γ) grid for `phase-diagram`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseDiagramGrid {
    pub omega_range: [f64; 2],
    pub omega_points: usize,
    pub gamma_range: [f64; 2],
    pub gamma_points: usize,
}

impl Default for PhaseDiagramGrid {
    fn default() -> Self {
        Self { omega_range: [0.1, 5.0], omega_points: 50, gamma_range: [0.1, 5.0], gamma_points: 50 }
    }
}

/// Loss-rate bracket for `ep`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EpSearch {
    pub bracket: [f64; 2],
}

impl Default for EpSearch {
    fn default() -> Self {
        Self { bracket: [0.1, 3.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub params: SystemParams,
    pub initial_state: InitialState,
    /// μs
    pub t_max: f64,
    pub n_samples: usize,
    pub method: Method,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub spectrum: SpectrumSweep,
    pub phase_diagram: PhaseDiagramGrid,
    pub ep: EpSearch,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::reference(0.5),
            initial_state: InitialState::Label("ff".into()),
            t_max: 20.0,
            n_samples: 2001,
            method: Method::Exact,
            output: None,
            format: None,
            spectrum: SpectrumSweep::default(),
            phase_diagram: PhaseDiagramGrid::default(),
            ep: EpSearch::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        // serde_json reports "... at line L column C"
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(CliError::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.n_samples < 2 {
            return Err(CliError::Config(format!("n_samples must be at least 2, got {}", self.n_samples)));
        }
        self.initial_state.to_state()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Values given on the command line; each replaces the matching config field.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Scenario file (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Loss rate γ of both qubits, 1/μs.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Drive amplitude Ω of both qubits, rad/μs.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Exchange coupling J, rad/μs.
    #[arg(long)]
    pub j: Option<f64>,
    /// Relaxation rate α of both qubits, 1/μs.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Detuning Δ of both qubits, rad/μs.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Initial basis state: ff, fe, ef or ee.
    #[arg(long)]
    pub initial: Option<String>,
    /// Time horizon, μs.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of time samples, including t = 0.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

impl Overrides {
    pub fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => ScenarioConfig::load(p)?,
            None => ScenarioConfig::default(),
        };
        let p = &mut c.params;
        if let Some(g) = self.gamma {
            *p = p.with_gamma(g);
        }
        if let Some(w) = self.omega {
            *p = p.with_omega(w);
        }
        if let Some(j) = self.j {
            p.j = j;
        }
        if let Some(a) = self.alpha {
            *p = p.with_alpha(a);
        }
        if let Some(d) = self.delta {
            p.delta1 = d;
            p.delta2 = d;
        }
        if let Some(s) = &self.initial {
            c.initial_state = InitialState::Label(s.clone());
        }
        if let Some(t) = self.tmax {
            c.t_max = t;
        }
        if let Some(n) = self.samples {
            c.n_samples = n;
        }
        if let Some(m) = self.method {
            c.method = m;
        }
        if let Some(o) = &self.out {
            c.output = Some(o.clone());
        }
        if let Some(f) = self.format {
            c.format = Some(f);
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = ScenarioConfig::default();
        assert_eq!(ScenarioConfig::from_json(&c.to_json(), "x").unwrap(), c);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = ScenarioConfig::from_json(r#"{"t_max": 5, "initial_state": "ee"}"#, "x").unwrap();
        assert_eq!(c.t_max, 5.0);
        assert_eq!(c.n_samples, 2001);
        assert_eq!(c.initial_state, InitialState::Label("ee".into()));
    }

    #[test]
    fn unknown_field_reports_position() {
        let err = ScenarioConfig::from_json("{\n  \"t_max\": 5,\n  \"tmax\": 3\n}", "s.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("tmax") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn amplitudes_must_be_normalized() {
        let s = InitialState::Amplitudes([[0.5, 0.0], [0.5, 0.0], [0.5, 0.0], [0.0, 0.5]]);
        assert!(s.to_state().is_ok());
        let bad = InitialState::Amplitudes([[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
        assert!(matches!(bad.to_state(), Err(CliError::Config(_))));
    }

    #[test]
    fn zero_horizon_rejected() {
        let c = ScenarioConfig { t_max: 0.0, ..Default::default() };
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
    }
}
