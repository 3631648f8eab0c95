mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::{Failure, Outcome};

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_MODEL: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e.render());
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let (outcome, bytes) = match commands::run(cli.command, &cli.opts) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Model(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_MODEL);
        }
    };

    let written = match &cli.opts.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_MODEL);
    }

    match outcome {
        Outcome::Success => ExitCode::SUCCESS,
        Outcome::Violation => ExitCode::from(EXIT_VIOLATION),
        Outcome::Infeasible => ExitCode::from(EXIT_INFEASIBLE),
    }
}
