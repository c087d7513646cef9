use std::process::ExitCode;

use clap::Parser;
use fieldnorm::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fieldnorm: {e:#}");
            ExitCode::from(2)
        }
    }
}
