use std::process::ExitCode;

use clap::Parser;
use sellkit::cli::{run, Cli};

fn main() -> ExitCode {
    match run(&Cli::parse()).map_err(anyhow::Error::from) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
