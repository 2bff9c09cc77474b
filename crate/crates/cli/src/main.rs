// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;
mod resolve;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Layer};
use error::{CliError, CliResult, EXIT_VALIDATION};

fn layered<T>(flags: T, file: Option<&serde_json::Value>) -> CliResult<T>
where
    T: Layer + serde::de::DeserializeOwned,
{
    match file {
        None => Ok(flags),
        Some(v) => {
            let from_file: T =
                serde_json::from_value(v.clone()).map_err(|e| CliError::validation(format!("config file: {e}")))?;
            Ok(flags.layer(from_file))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = cli.config.as_deref().map(output::read_config).transpose()?;
    let file = file.as_ref();
    match cli.command {
        Command::Spectrum(a) => commands::spectrum::run(layered(a, file)?),
        Command::Scan(a) => commands::scan::run(layered(a, file)?),
        Command::Infinite(a) => commands::infinite::run(layered(a, file)?),
        Command::Fit(a) => commands::fit::run(layered(a, file)?),
        Command::Check(a) => commands::check::run(layered(a, file)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dicke: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
