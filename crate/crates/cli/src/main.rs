//! `operad`: dimensions, Gröbner bases, generating series and bounds for
//! operads given by generators and relations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod selftest;

#[derive(Parser, Debug)]
#[command(name = "operad", version, about = "Exact computations with operad presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of the arity components, with certification tags.
    Dims(FileArgs),
    /// Gröbner basis up to the arity cap.
    Gb(FileArgs),
    /// Stamp system, generating series, algebraic and differential equations.
    Series(FileArgs),
    /// Lower and upper bounds on dimensions, side by side.
    Bounds(FileArgs),
    /// Randomized consistency checks of the library.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Truncation order: series coefficients and arities up to N.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub order: u64,
    /// Arity cap for Gröbner basis completion.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub cap: u64,
    /// Node budget for counting and reduction-step budget for completion.
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Generator precedence, largest first; overrides the file.
    #[arg(long, value_delimiter = ',')]
    pub precedence: Option<Vec<String>>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Text,
}

#[derive(Args, Debug)]
struct FileArgs {
    /// Presentation file.
    file: PathBuf,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random presentations.
    #[arg(long, default_value_t = 20)]
    cases: usize,
    #[command(flatten)]
    config: RunConfig,
}

/// Failures, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Hypothesis(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Invariant(_) => 5,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match &cli.command {
        Command::Dims(a) => commands::dims(&a.file, &a.config, &mut out),
        Command::Gb(a) => commands::gb(&a.file, &a.config, &mut out),
        Command::Series(a) => commands::series(&a.file, &a.config, &mut out),
        Command::Bounds(a) => commands::bounds(&a.file, &a.config, &mut out),
        Command::Selftest(a) => selftest::run(a.seed, a.cases, &a.config, &mut out),
    };
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
