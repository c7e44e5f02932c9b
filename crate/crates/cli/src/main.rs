use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Computable-analysis laboratory: coded reals, Specker sequences, singular
/// covers, constructive measurement and the sorites harness.
#[derive(Debug, Parser)]
#[command(name = "sorites-lab", version)]
pub struct Cli {
    /// Upper bound on any dovetail or step budget.
    #[arg(long, env = "SORITES_LAB_BUDGET_CAP", default_value_t = 100_000_000, global = true)]
    pub budget_cap: u64,

    /// Every run is seeded and ordered deterministically; kept for
    /// compatibility with scripted invocations.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set, global = true)]
    pub deterministic: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial sums s_n of a Specker sequence.
    Specker(SpeckerArgs),
    /// Build a cover.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Greedy creeping chain over a cover read from a JSON file.
    Creep(CreepArgs),
    /// Measurement homomorphism approximant.
    Holder(HolderArgs),
    /// Run a sorites argument.
    #[command(subcommand)]
    Sorites(SoritesCommand),
    /// Register machine utilities.
    #[command(subcommand)]
    Machine(MachineCommand),
}

#[derive(Debug, Args)]
pub struct SpeckerArgs {
    /// `identity`, `stub:V,V,...` or `halting`.
    #[arg(long = "f", default_value = "identity")]
    pub f: String,
    /// Last index to print.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Dovetail budget for `halting`.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// The singular cover from the totality enumeration.
    Singular(SingularArgs),
}

#[derive(Debug, Args)]
pub struct SingularArgs {
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Number of intervals required.
    #[arg(long, default_value_t = 5)]
    pub terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CreepArgs {
    /// JSON array of `{"lo", "hi", "index"}` rows.
    #[arg(long)]
    pub cover: PathBuf,
    #[arg(long, default_value_t = 1_000)]
    pub max_steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Structure {
    Qplus,
    Dyadic,
}

#[derive(Debug, Args)]
pub struct HolderArgs {
    #[arg(long, value_enum, default_value_t = Structure::Qplus)]
    pub structure: Structure,
    #[arg(long)]
    pub a: String,
    #[arg(long, default_value = "1")]
    pub unit: String,
    #[arg(long, default_value = "1")]
    pub r: String,
    #[arg(long, default_value_t = 10)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum SoritesCommand {
    /// Chain of heights under a tolerance premise.
    Discrete(DiscreteArgs),
    /// Continuous argument through the partial sums of a Specker sequence.
    Continuous(ContinuousArgs),
    /// Covering argument through the singular cover.
    Covering(CoveringArgs),
}

#[derive(Debug, Args)]
pub struct DiscreteArgs {
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    #[arg(long, default_value = "6/5")]
    pub start: String,
    #[arg(long, default_value = "1/1000")]
    pub delta: String,
    /// Cutoff of the classical foil predicate.
    #[arg(long, default_value = "9/5")]
    pub threshold: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ContinuousArgs {
    /// `identity`, `stub:V,V,...` or `halting`.
    #[arg(long = "f", default_value = "halting")]
    pub f: String,
    /// Dovetail budget for `halting`.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Terms scanned per evaluation.
    #[arg(long, default_value_t = 1_000)]
    pub terms: usize,
    #[arg(long, default_value_t = 10)]
    pub k: u32,
    /// Plant at index 0 a program that halts after this many steps.
    #[arg(long)]
    pub plant_delay: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Intervals of the cover prefix.
    #[arg(long, default_value_t = 200)]
    pub terms: usize,
    #[arg(long, default_value_t = 200)]
    pub max_steps: usize,
    /// Sampled pairs per chain interval for the congruence check.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum MachineCommand {
    /// Run a program on one input.
    Run(RunArgs),
    /// Canonical code of a program.
    Encode(ProgramArg),
    /// Program with the given code.
    Decode(DecodeArgs),
}

#[derive(Debug, Args)]
pub struct ProgramArg {
    /// Program file, or a decimal code.
    pub program: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Program file, or a decimal code.
    pub program: String,
    #[arg(long, default_value_t = 0)]
    pub input: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    pub code: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
