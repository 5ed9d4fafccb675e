use std::process::ExitCode;

use clap::Parser;
use sigmak_cli::{run, Cli};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => ExitCode::from(run(cli)),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                ExitCode::from(sigmak_cli::exit::CONFIG)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
