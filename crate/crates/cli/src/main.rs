use std::process::ExitCode;

use clap::Parser;
use qgrd_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qgrd: {e}");
            ExitCode::from(2)
        }
    }
}
