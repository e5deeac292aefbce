use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gw_core::GwError;

mod commands;
mod render;

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "gw", version, about = "Grothendieck-Witt and Witt rings of Z/2^n and F2[x]/(x^n)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for randomized checks and for sampled relation enumeration.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Limit for the command's main enumeration: relation tuples for
    /// compute/verify/tower, symmetric matrices for oracle.
    #[arg(long, global = true)]
    cap: Option<u128>,

    /// Fail with exit code 3 instead of sampling relations.
    #[arg(long, global = true)]
    exact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Square classes, GW and W groups, generator coordinates and products.
    Compute {
        #[arg(long)]
        ring: String,
    },
    /// The group of square classes of units.
    SquareClasses {
        #[arg(long)]
        ring: String,
    },
    /// Run one of the verification suites.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[arg(long)]
        ring: Option<String>,
        /// Number of random trials (lemma-odd, factorization).
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Compare congruence classification of diagonal forms with equality
    /// in GW.
    Oracle {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
        max_rank: u8,
    },
    /// Induced maps along the tower of projections.
    Tower {
        #[arg(long)]
        family: String,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    OrthogonalGroups,
    LemmaOdd,
    Factorization,
    Relations,
    PfisterVanishing,
    Symmetrisation,
}

/// Global settings shared by all subcommands.
pub struct Config {
    pub seed: u64,
    pub cap: Option<u128>,
    pub exact: bool,
}

fn exit_code(e: &GwError) -> u8 {
    match e {
        GwError::CapExceeded { .. } => 3,
        GwError::Internal(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<Outcome, GwError> {
    let cfg = Config {
        seed: cli.seed,
        cap: cli.cap,
        exact: cli.exact,
    };
    match cli.command {
        Command::Compute { ring } => commands::compute(&cfg, &ring),
        Command::SquareClasses { ring } => commands::square_classes(&ring),
        Command::Verify { target, ring, trials } => commands::verify(&cfg, target, ring.as_deref(), trials),
        Command::Oracle { ring, max_rank } => commands::oracle(&cfg, &ring, max_rank as usize),
        Command::Tower { family, from, to } => commands::tower(&cfg, &family, from, to),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(outcome) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&outcome.json).expect("serializable")),
                Format::Text => print!("{}", outcome.text),
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
