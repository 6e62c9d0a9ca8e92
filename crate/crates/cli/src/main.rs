use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nhqubit_cli::{run, Cli, CliError};

fn emit(r: &nhqubit_cli::Rendered) -> Result<(), CliError> {
    match &r.destination {
        Some(p) => std::fs::write(p, &r.text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(r.text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|r| {
        emit(&r)?;
        r.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nhqubit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
