mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BenchFamily, FamilyMode};
use error::CliError;

/// Matroid base polytopes, hitting families and protocol-derived extended
/// formulations, all in exact arithmetic.
///
/// Enumeration caps can be raised with MATROID_XF_CAPS, e.g.
/// MATROID_XF_CAPS="max_bases=5000000,max_cover_columns=20000".
#[derive(Debug, Parser)]
#[command(name = "matroid-xf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ground set size, rank, basis count and connectivity.
    Info { matroid: PathBuf },
    /// The flats inducing facets of the base polytope.
    Flacets { matroid: PathBuf },
    /// Greedy and exact hitting numbers, with the family found.
    Hitting { matroid: PathBuf },
    /// The slack matrix as CSV.
    Slack {
        matroid: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Checks protocol expectation against slack on every (flacet, basis) pair.
    ProtocolCheck {
        matroid: PathBuf,
        #[arg(long, value_enum)]
        family_mode: Option<FamilyMode>,
    },
    /// Builds the extended formulation and reports its size.
    BuildXf {
        matroid: PathBuf,
        #[arg(long, value_enum)]
        family_mode: Option<FamilyMode>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verifies vertex lifting and optimization equivalence.
    VerifyXf {
        matroid: PathBuf,
        #[arg(long, value_enum)]
        family_mode: Option<FamilyMode>,
        #[arg(long, default_value_t = 50)]
        objectives: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Tabulates sizes over a family of matroids (TSV).
    Bench {
        #[arg(long, value_enum)]
        family: BenchFamily,
        #[arg(long, default_value_t = 3)]
        min_n: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let caps = input::caps_from_env()?;
    let load = |p: &PathBuf| input::load_matroid(p);
    match cli.command {
        Command::Info { matroid } => commands::info(load(&matroid)?, &caps),
        Command::Flacets { matroid } => commands::flacets(load(&matroid)?, &caps),
        Command::Hitting { matroid } => commands::hitting(load(&matroid)?, &caps),
        Command::Slack { matroid, output } => commands::slack(load(&matroid)?, &caps, output.as_deref()),
        Command::ProtocolCheck { matroid, family_mode } => {
            commands::protocol_check(load(&matroid)?, &caps, family_mode)
        }
        Command::BuildXf { matroid, family_mode, output } => {
            commands::build_xf(load(&matroid)?, &caps, family_mode, output.as_ref())
        }
        Command::VerifyXf { matroid, family_mode, objectives, seed } => {
            commands::verify_xf(load(&matroid)?, &caps, family_mode, objectives, seed)
        }
        Command::Bench { family, min_n, max_n } => commands::bench(family, min_n, max_n, &caps),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
