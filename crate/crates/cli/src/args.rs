use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "steerkit", version, about = "Two-qubit EPR steering and CHSH analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for outputs when --out is not given; stdout otherwise.
    #[arg(long, global = true, env = "STEERKIT_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one state and one choice of measurements (JSON).
    Analyze(AnalyzeArgs),
    /// Evaluate a family over a parameter grid (CSV).
    Scan(ScanArgs),
    /// Compare the SDP and coexistence verdicts on random instances.
    Crosscheck(CrosscheckArgs),
    /// Finite-shot measurement statistics (CSV plus JSON summary).
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hierarchy,
    #[value(name = "one_way")]
    OneWay,
    #[value(name = "one_way_povm")]
    OneWayPovm,
    #[value(name = "bell_diagonal")]
    BellDiagonal,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pure,
    Mixed,
    #[value(name = "bell_diagonal")]
    BellDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Axes from --axes (default x and z on both sides).
    Fixed,
    /// Top singular vectors of T; attains the analog-CHSH maximum.
    Optimal,
    /// Unbiased pairs attaining the MUB-restricted CHSH maximum.
    Mub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    #[value(name = "C")]
    Concurrence,
    #[value(name = "N")]
    Negativity,
    #[value(name = "S")]
    S,
    #[value(name = "S_M")]
    SMub,
    Margin,
    Sdp,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_enum, required_unless_present = "state")]
    pub family: Option<Family>,
    /// Family parameters: s | p,theta | four Bell weights | seed.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
    /// JSON file {"alpha": [..], "beta": [..], "T": [[..], [..], [..]]}.
    #[arg(long, conflicts_with_all = ["family", "params"])]
    pub state: Option<PathBuf>,
    /// Distribution for the random family.
    #[arg(long, value_enum, default_value = "mixed")]
    pub kind: Kind,
}

#[derive(Debug, Args)]
pub struct AxesArgs {
    /// Two vectors for both parties, or four (Alice's two, then Bob's two),
    /// e.g. "1,0,0;0,0,1".
    #[arg(long, allow_hyphen_values = true)]
    pub axes: Option<String>,
    #[arg(long, value_enum, default_value = "fixed")]
    pub policy: Policy,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub axes: AxesArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// name=start:stop:count per parameter (s; p and theta), or n=count
    /// for the random and bell_diagonal families.
    #[arg(long, required = true)]
    pub grid: Vec<String>,
    #[command(flatten)]
    pub axes: AxesArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "C,N,S,S_M,margin,sdp")]
    pub outputs: Vec<Output>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "mixed")]
    pub kind: Kind,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    /// Number of random (state, axes) instances.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub axes: AxesArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
