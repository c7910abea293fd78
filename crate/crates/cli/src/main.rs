//! `nullwave verify|classify|generate --config <path>`
//!
//! Exit codes: 0 pass, 2 bad input, 3 verdict failure, 4 numeric failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Verdict,
    Numeric,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Verdict => 3,
            Outcome::Numeric => 4,
        }
    }
}

const PARSE_EXIT: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "nullwave",
    version,
    about = "Verify and generate null solutions of the wave equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Finite-difference step; implies the central-difference scheme.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Single threshold for every verdict residual.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Check the null-solution and shear-free branch conditions on a grid.
    Verify,
    /// Classify a null direction in the kernel of df at a point.
    Classify,
    /// Sample a Kerr or twistor-surface solution on a grid.
    Generate,
}

/// Worker cap from `NULLWAVE_THREADS`.
fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("NULLWAVE_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "NULLWAVE_THREADS must be a positive integer, got {s:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let path = cli
        .config
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let overrides = Overrides {
        out: cli.out,
        format: cli.format,
        h: cli.h,
        tol: cli.tol,
    };
    let resolved = config::load(&path, &overrides)?;
    let threads = threads()?;
    let (body, outcome) = match cli.command {
        Command::Verify => commands::verify(&resolved, threads)?,
        Command::Classify => commands::classify(&resolved)?,
        Command::Generate => commands::generate(&resolved, threads)?,
    };
    match &resolved.out {
        Some(p) => std::fs::write(p, body).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        })?,
        None => print!("{body}"),
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { PARSE_EXIT } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) => ExitCode::from(o.code()),
        Err(e) => {
            eprintln!("nullwave: {e}");
            ExitCode::from(PARSE_EXIT)
        }
    }
}
