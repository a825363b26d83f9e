use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use orlicz_cli::{run, Cli, CliError};

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|r| {
        emit(&cli, &r.text)?;
        match r.failure {
            Some(msg) => Err(CliError::Invariant(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("orlicz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
