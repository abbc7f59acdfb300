//! Command-line front end for `steerkit-core`.
//!
//! Four subcommands, each writing one artifact to `--out`, to
//! `$STEERKIT_OUT_DIR/<command>_<family>.<ext>`, or to stdout:
//!
//! * `analyze`: JSON report for one state and one choice of axes.
//! * `scan`: CSV over a family's parameter grid, one row per grid point.
//! * `crosscheck`: JSON summary of SDP versus coexistence verdicts.
//! * `sample`: CSV of finite-shot counts, one row per joint setting, plus a
//!   JSON summary.
//!
//! Exit codes: 0 success, 1 runtime error, 2 invalid input, 3 cross-check
//! disagreement.

pub mod analyze;
pub mod args;
pub mod crosscheck;
pub mod evaluate;
pub mod input;
pub mod output;
pub mod sample;
pub mod scan;

use std::fmt;

use args::{Cli, Command};

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input files.
    Validation(String),
    /// The cross-check found verdicts that disagree outside the band.
    Disagreement(String),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Disagreement(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Disagreement(m) => write!(f, "cross-check failed: {m}"),
            Failure::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<steerkit_core::Error> for Failure {
    fn from(e: steerkit_core::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Analyze(a) => analyze::run(&a, dir),
        Command::Scan(a) => scan::run(&a, dir),
        Command::Crosscheck(a) => crosscheck::run(&a, dir),
        Command::Sample(a) => sample::run(&a, dir),
    }
}
