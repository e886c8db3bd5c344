//! `qipsim`: solve, verify and analyze bounded polynomial integer programs
//! on the exact quantum simulator.

mod analyze;
mod solve;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qipsim::problem::CubMode;
use qipsim::state::DEFAULT_DIM_CAP;

/// Exit codes shared by the subcommands.
pub mod exit {
    pub const MISMATCH: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const UNDECIDABLE: u8 = 3;
    pub const DEGENERATE: u8 = 4;
}

#[derive(Parser)]
#[command(name = "qipsim", version, about = "Exact simulator for qudit-based polynomial integer programming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run both stages on a problem file and write report.json and distributions.csv.
    Solve(solve::SolveArgs),
    /// Compare solve against brute-force enumeration.
    Verify(verify::VerifyArgs),
    /// Evaluate the complexity models and repetition curves.
    Analyze(analyze::AnalyzeArgs),
}

/// Flags shared by `solve` and `verify`.
#[derive(Args, Clone)]
pub struct StageTwoArgs {
    /// Cost bound: guaranteed, paper, dyadic, or a number.
    #[arg(long, value_parser = parse_cub)]
    pub cub: Option<CubMode>,
    /// Phase register width in qubits.
    #[arg(long)]
    pub l: Option<usize>,
    /// Rotate on the true cost instead of the measured phase.
    #[arg(long)]
    pub ideal: bool,
}

pub fn parse_cub(s: &str) -> Result<CubMode, String> {
    match s {
        "guaranteed" => Ok(CubMode::Guaranteed),
        "paper" => Ok(CubMode::PaperStyle),
        "dyadic" => Ok(CubMode::Dyadic),
        v => v
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x > 0.0)
            .map(CubMode::Override)
            .ok_or_else(|| format!("expected guaranteed, paper, dyadic or a positive number, got {v:?}")),
    }
}

/// Amplitude cap from `QIPSIM_DIM_CAP`, or the library default.
pub fn dim_cap() -> Result<usize, String> {
    match std::env::var("QIPSIM_DIM_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| format!("QIPSIM_DIM_CAP must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

pub fn read_problem(path: &PathBuf) -> Result<qipsim::IpProblem, qipsim::Error> {
    let text = std::fs::read_to_string(path).map_err(|e| qipsim::Error::Schema(format!("{}: {e}", path.display())))?;
    qipsim::parse_problem(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Analyze(a) => analyze::run(a),
    };
    ExitCode::from(code)
}
