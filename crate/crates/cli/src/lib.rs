//! Library side of the `nhqubit` command-line tool.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{cmd_ep, cmd_evolve, cmd_master, cmd_phase_diagram, cmd_spectrum, Report};
pub use config::{EpSearch, Format, InitialState, Overrides, PhaseDiagramGrid, ScenarioConfig, SpectrumSweep};
pub use output::{Cell, ResultTable, Table};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<nhqubit::Error> for CliError {
    fn from(e: nhqubit::Error) -> Self {
        use nhqubit::Error as E;
        match e {
            E::InvalidParameter { .. } | E::InvalidGrid(_) | E::InvalidDensityMatrix(_) | E::InvalidBracket { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nhqubit", version, about = "Entanglement dynamics and PT-symmetry of two coupled non-Hermitian qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditional pure-state evolution: populations, norm, concurrence.
    Evolve(#[command(flatten)] Overrides),
    /// Master-equation evolution with relaxation α: no-jump probability, populations, concurrence.
    Master(#[command(flatten)] Overrides),
    /// Complex spectrum over a loss-rate sweep.
    Spectrum {
        #[command(flatten)]
        common: Overrides,
        #[command(flatten)]
        gamma: GammaAxis,
    },
    /// PT-phase labels over an (Ω, γ) grid plus EP boundary samples.
    PhaseDiagram {
        #[command(flatten)]
        common: Overrides,
        #[command(flatten)]
        gamma: GammaAxis,
        #[arg(long)]
        omega_min: Option<f64>,
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long)]
        omega_points: Option<usize>,
    },
    /// Locate the exceptional point by bisection on the phase label.
    Ep {
        #[command(flatten)]
        common: Overrides,
        /// Lower end of the γ bracket (must be unbroken).
        #[arg(long)]
        lo: Option<f64>,
        /// Upper end of the γ bracket (must be broken).
        #[arg(long)]
        hi: Option<f64>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct GammaAxis {
    #[arg(long)]
    pub gamma_min: Option<f64>,
    #[arg(long)]
    pub gamma_max: Option<f64>,
    /// Number of γ samples.
    #[arg(long = "gamma-points", visible_alias = "points")]
    pub points: Option<usize>,
}

impl GammaAxis {
    fn apply(&self, range: &mut [f64; 2], points: &mut usize) {
        if let Some(v) = self.gamma_min {
            range[0] = v;
        }
        if let Some(v) = self.gamma_max {
            range[1] = v;
        }
        if let Some(v) = self.points {
            *points = v;
        }
    }
}

/// Rendered output and where it goes.
#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub destination: Option<PathBuf>,
    pub failure: Option<CliError>,
}

pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    let (config, report, default_format) = match &cli.command {
        Command::Evolve(o) => {
            let c = o.resolve()?;
            let r = cmd_evolve(&c)?;
            (c, r, Format::Csv)
        }
        Command::Master(o) => {
            let c = o.resolve()?;
            let r = cmd_master(&c)?;
            (c, r, Format::Csv)
        }
        Command::Spectrum { common, gamma } => {
            let mut c = common.resolve()?;
            let s = &mut c.spectrum;
            gamma.apply(&mut s.gamma_range, &mut s.gamma_points);
            let r = cmd_spectrum(&c)?;
            (c, r, Format::Csv)
        }
        Command::PhaseDiagram { common, gamma, omega_min, omega_max, omega_points } => {
            let mut c = common.resolve()?;
            let d = &mut c.phase_diagram;
            gamma.apply(&mut d.gamma_range, &mut d.gamma_points);
            if let Some(v) = omega_min {
                d.omega_range[0] = *v;
            }
            if let Some(v) = omega_max {
                d.omega_range[1] = *v;
            }
            if let Some(v) = omega_points {
                d.omega_points = *v;
            }
            let r = cmd_phase_diagram(&c)?;
            (c, r, Format::Csv)
        }
        Command::Ep { common, lo, hi } => {
            let mut c = common.resolve()?;
            if let Some(v) = lo {
                c.ep.bracket[0] = *v;
            }
            if let Some(v) = hi {
                c.ep.bracket[1] = *v;
            }
            let r = cmd_ep(&c)?;
            (c, r, Format::Text)
        }
    };
    let text = match config.format.unwrap_or(default_format) {
        Format::Csv => report.result.to_csv(),
        Format::Json => report.result.to_json(),
        Format::Text if matches!(cli.command, Command::Ep { .. }) => report.result.to_text(),
        Format::Text => return Err(CliError::Config("text format is only available for `ep`".into())),
    };
    Ok(Rendered { text, destination: config.output, failure: report.failure })
}
