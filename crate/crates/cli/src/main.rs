//! `tjusim`: figure data and feasibility reports for the t-J-U protocol.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tjusim_core::{Boundary, TrotterOrder};

use crate::config::{Command, Flags, Format, RunConfig, SectorArg};
use crate::error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(name = "tjusim", version, about = "t-J-U protocol simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON file with parameters for the chosen command
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file (stdout when absent)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// open or periodic
    #[arg(long, global = true, value_parser = parse_boundary)]
    boundary: Option<Boundary>,

    /// full, or NUP,NDOWN to restrict inputs to one spin sector
    #[arg(long, global = true, value_name = "full|NUP,NDOWN")]
    sector: Option<SectorArg>,

    /// Trotter order, 1 or 2
    #[arg(long, global = true, value_parser = parse_order)]
    order: Option<TrotterOrder>,

    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for random state sampling
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Minimal shift-and-hold times per species and lattice depth
    FigShiftTimes,
    /// Anti-fidelity bound against total time
    FigTime,
    /// Anti-fidelity bound against number of Trotter steps
    FigSteps,
    /// Anti-fidelity bound against chain length
    FigSites,
    /// Timing budget of the protocol for one species
    Feasibility,
    /// Bound, sampled state errors and propagators for arbitrary parameters
    Evolve,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::FigShiftTimes => Command::FigShiftTimes,
            Cmd::FigTime => Command::FigTime,
            Cmd::FigSteps => Command::FigSteps,
            Cmd::FigSites => Command::FigSites,
            Cmd::Feasibility => Command::Feasibility,
            Cmd::Evolve => Command::Evolve,
        }
    }
}

fn parse_boundary(s: &str) -> std::result::Result<Boundary, String> {
    s.parse().map_err(|e: tjusim_core::Error| e.to_string())
}

fn parse_order(s: &str) -> std::result::Result<TrotterOrder, String> {
    let v: u8 = s.parse().map_err(|_| format!("expected 1 or 2, got '{s}'"))?;
    TrotterOrder::try_from(v).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    let command = Command::from(cli.command);
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path, command)?,
        None => RunConfig::default(),
    };
    let flags = Flags {
        out: cli.out,
        format: cli.format,
        boundary: cli.boundary,
        sector: cli.sector,
        order: cli.order,
        seed: cli.seed,
    };
    let (job, output) = cfg.resolve(command, &flags)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    let text = commands::run(&job, output.format)?;
    output::emit(&text, output.path.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&msg).trim_start_matches("error: ");
            eprintln!("{}", CliError::config(first).to_line());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code())
        }
    }
}
