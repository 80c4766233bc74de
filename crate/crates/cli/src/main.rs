//! `ccifc`: rate regions of the Gaussian cognitive interference channel and the
//! finite-alphabet capacity formulas, as CSV files plus a run manifest.

mod config;
mod dmc;
mod figure;
mod oracle;
mod region;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ccifc",
    version,
    about = "Rate regions for the cognitive interference channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frontier of one strategy or baseline on one scenario.
    Region(RegionArgs),
    /// Every curve of a figure preset, plus a dominance report read back from the CSVs.
    Figure(FigureArgs),
    /// Closed-form region against the split-rate LP on random term vectors.
    Oracle(OracleArgs),
    /// Condition report and capacity frontier of a finite channel.
    Dmc(DmcArgs),
}

#[derive(Args)]
pub struct RegionArgs {
    /// JSON file with any of the flags below (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Scenario JSON with fields P1, P2, h21, h31, h32, h41, h42, N2, N3, N4.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// classical, nodelay, lookahead, hk or outer.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Points per allocation fraction.
    #[arg(long)]
    pub grid: Option<usize>,
    /// paper, zero or manual:a1,a2.
    #[arg(long)]
    pub dpc: Option<String>,
    /// Pin an allocation field, e.g. `gamma3=0`. Repeatable.
    #[arg(long = "mask")]
    pub masks: Vec<String>,
    #[arg(long)]
    pub h21: Option<f64>,
    #[arg(long)]
    pub n2: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cap the outer bound at the single-user rate including the direct gain.
    #[arg(long)]
    pub cap_with_gain: bool,
}

#[derive(Args)]
pub struct FigureArgs {
    /// fig6, fig7, fig8, fig9strong, fig9mixed or fig10.
    pub name: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cap_with_gain: bool,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tighten one closed-form bound family (1..8) before comparing; for testing
    /// that the oracle catches a wrong bound.
    #[arg(long, hide = true)]
    pub corrupt_family: Option<usize>,
}

#[derive(Args)]
pub struct DmcArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Channel JSON: {"sizes": [x1, x2, y2, y3, y4], "transition": [...]}.
    #[arg(long, conflicts_with = "fixture")]
    pub channel: Option<PathBuf>,
    /// Built-in channel: xor, zero, rx1_violation, degraded_noisy, degraded_cor, semidet_noisy.
    #[arg(long)]
    pub fixture: Option<String>,
    /// degraded, degraded_cor or semidet. Without it only the conditions are checked.
    #[arg(long, conflicts_with = "check_only")]
    pub capacity: Option<String>,
    #[arg(long)]
    pub check_only: bool,
    /// Grid step of the input distributions is 1/q.
    #[arg(long)]
    pub q: Option<usize>,
    /// Largest time-sharing alphabet.
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Random input distributions per sampled condition.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Region(a) => region::run(a),
        Command::Figure(a) => figure::run(a),
        Command::Oracle(a) => oracle::run(a),
        Command::Dmc(a) => dmc::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ccifc: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
