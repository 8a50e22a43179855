use std::process::ExitCode;

use clap::Parser;
use spectral_distance_cli::{execute, Cli, CliError, Status};

fn run() -> Result<Status, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let status = if e.use_stderr() { Status::Usage } else { Status::Pass };
            let _ = e.print();
            return Ok(status);
        }
    };
    let execution = execute(&cli)?;
    for warning in &execution.warnings {
        eprintln!("{warning}");
    }
    match &execution.out {
        Some(path) => std::fs::write(path, &execution.rendered)
            .map_err(|source| CliError::Output { path: path.clone(), source })?,
        None => print!("{}", execution.rendered),
    }
    Ok(execution.status())
}

fn main() -> ExitCode {
    match run() {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Usage as u8)
        }
    }
}
