//! `horocount` command-line front end.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "horocount",
    version,
    about = "Counting lifts of closed horocycles on SL_N(Z)\\SL_N(R)/SO_N(R)"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "HOROCOUNT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Asymptotic counting constant c·R^p·e^{qR}.
    Constant(ConstantArgs),
    /// Enumerate cosets of height at most R.
    Count(CountArgs),
    /// Quadrature of the A-part measure over height balls.
    Volume(VolumeArgs),
    /// Limit of a clean translated horocyclic sequence.
    Classify(ClassifyArgs),
    /// Run the acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct PartitionArgs {
    /// Matrix size N.
    #[arg(long)]
    pub n: usize,
    /// Block sizes, e.g. 2,1.
    #[arg(long, value_delimiter = ',', required = true)]
    pub blocks: Vec<usize>,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub partition: PartitionArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON to this file.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Bfs,
    Brute,
    Both,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    pub partition: PartitionArgs,
    /// One or more radii; the search runs once at the largest.
    #[arg(long, value_delimiter = ',', required = true)]
    pub radius: Vec<f64>,
    #[arg(long, value_enum, default_value = "bfs")]
    pub method: CountMethod,
    /// BFS pruning margin above R.
    #[arg(long, default_value_t = 2.0)]
    pub margin: f64,
    /// BFS layer cap (default: none).
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// BFS memory budget in stored cosets.
    #[arg(long, default_value_t = 8_000_000)]
    pub max_states: usize,
    /// Fixed entry bound for the brute-force scan (default: sized from R and
    /// doubled until stable).
    #[arg(long)]
    pub entry_bound: Option<i64>,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    /// Write the full report (including coset representatives) as JSON.
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RegionArg {
    /// B⁺(R)
    #[value(name = "b+")]
    #[serde(rename = "b+")]
    BPlus,
    /// B^{C,+}(R), needs --c
    #[value(name = "bc+")]
    #[serde(rename = "bc+")]
    BcPlus,
    /// B⁺(R) ∖ B⁺(εR), needs --epsilon
    #[value(name = "annulus")]
    #[serde(rename = "annulus")]
    Annulus,
    /// B(R), chamber only
    #[value(name = "ball")]
    #[serde(rename = "ball")]
    Ball,
    /// {‖y‖ ≤ R} ∩ 𝒞_C with the pure exponential integrand, needs --c
    #[value(name = "cone")]
    #[serde(rename = "cone")]
    Cone,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub radius: Vec<f64>,
    #[arg(long, value_enum, default_value = "b+")]
    pub region: RegionArg,
    /// Cone offset C.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Monte Carlo with this many samples.
    #[arg(long, conflicts_with = "grid")]
    pub mc: Option<u64>,
    /// Product grid with this step.
    #[arg(long)]
    pub grid: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub partition: PartitionArgs,
    /// Per block: unbounded|identity (default all identity).
    #[arg(long, value_delimiter = ',')]
    pub a_behavior: Vec<String>,
    /// Per proper block prefix: infinity|one|zero. The full prefix is always
    /// one and may be omitted.
    #[arg(long, value_delimiter = ',')]
    pub b_behavior: Vec<String>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct SelftestArgs {
    /// Use the full sizes instead of the quick ones.
    #[arg(long)]
    pub full: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => EXIT_USAGE,
                ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    match commands::run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
