//! `feign`: command-line front end for the feigned-ignorance solver.
//!
//! Exit codes: 0 success, 2 invalid input, 3 resource or internal limit.

mod cli;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::Cli;
use crate::error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let report = commands::run(&cli.command)?;
    let output = cli.command.output();
    let bytes = output::render(cli.command.name(), &report, output.format)?;
    output::emit(&bytes, output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
