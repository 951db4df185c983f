mod commands;
mod literal;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{InputError, Report, RunConfig, Status};
use recolle_core::algebra::QuiverPresentation;
use recolle_core::exactla::Field;

#[derive(Parser)]
#[command(name = "recolle", version, about = "Recollements of derived categories of finite-dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// quiver with relations as JSON
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// resolution depth (default 2·dim A + 4)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    depth: Option<u64>,
    /// exceptional search: number of nonzero degrees
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    max_len: u64,
    /// exceptional search: summands per degree
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    max_mult: u64,
    /// Q, F<p> or <p>
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// dimension, Cartan matrix, radical layers of projectives, gldim
    Analyze,
    /// every vertex idempotent: stratifying status, restrictions, ladders
    Recollements {
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// stratification trees and the Jordan–Hölder comparison
    Stratify {
        #[arg(long, default_value_t = 8)]
        recursion_limit: usize,
    },
    /// indecomposable exceptional complexes within the search caps
    Exceptional,
    /// dim Hom(X, Y[n]) in K^b(proj); every nonzero n when --n is absent
    Hom {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
    },
    /// derived Nakayama functor on a complex
    Nakayama {
        #[arg(long)]
        x: String,
    },
    /// compare the main algorithms with brute-force oracles
    OracleCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

fn parse_field(s: &str) -> Result<Field, String> {
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let p: u64 = s.strip_prefix('F').unwrap_or(s).parse().map_err(|_| format!("expected Q, F<p> or <p>, got {s:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn budget() -> Result<Option<u128>, InputError> {
    match std::env::var("RECOLLE_BUDGET") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| InputError(format!("RECOLLE_BUDGET is not a number: {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<QuiverPresentation, InputError> {
    let path = path.as_ref().ok_or_else(|| InputError("--input is required".into()))?;
    let s = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    QuiverPresentation::from_json(&s).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let q = read_input(&cli.input)?;
    let mut cfg = RunConfig {
        depth: cli.depth.map(|d| d as usize),
        max_len: cli.max_len as usize,
        max_mult: cli.max_mult as usize,
        field: cli.field,
        seed: cli.seed,
        steps: 4,
        budget: budget()?,
    };
    match &cli.command {
        Command::Analyze => commands::cmd_analyze(&q, &cfg),
        Command::Recollements { steps } => {
            cfg.steps = *steps;
            commands::cmd_recollements(&q, &cfg)
        }
        Command::Stratify { recursion_limit } => commands::cmd_stratify(&q, &cfg, *recursion_limit),
        Command::Exceptional => commands::cmd_exceptional(&q, &cfg),
        Command::Hom { x, y, n } => commands::cmd_hom(&q, &cfg, x, y, *n),
        Command::Nakayama { x } => commands::cmd_nakayama(&q, &cfg, x),
        Command::OracleCheck => commands::cmd_oracle_check(&q, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
        Format::Text => report.text.clone(),
        Format::Dot => match &report.dot {
            Some(d) => d.clone(),
            None => {
                eprintln!("error: this command has no DOT output");
                return ExitCode::from(2);
            }
        },
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    match report.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Incomplete => ExitCode::from(3),
        Status::Violation(msg) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(4)
        }
    }
}
