use std::process::ExitCode;

use clap::Parser;

use lumpgeom_cli::commands::{exit_code_for, run};
use lumpgeom_cli::config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
