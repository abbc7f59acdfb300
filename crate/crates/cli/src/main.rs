use std::process::ExitCode;

use clap::Parser;
use steerkit::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match steerkit::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("steerkit: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
