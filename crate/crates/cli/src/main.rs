use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(edgedim_cli::run(edgedim_cli::Cli::parse()))
}
