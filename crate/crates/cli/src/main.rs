//! `fejer` command-line front end.

mod commands;
mod error;
mod registry;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
pub use error::CliError;

/// Exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_NONCONVERGED: u8 = 3;
pub const EXIT_NO_BRACKET: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "fejer", version, about = "Riesz–Fejér type inequalities on the unit disk: checks, sweeps and searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an inequality on a named function or a random corpus.
    Verify(VerifyArgs),
    /// Ratio of diameter to boundary integral along the extremal family.
    Sharpness(SharpnessArgs),
    /// Table of the sharp constants.
    Constants(ConstantsArgs),
    /// Solve the rectangle map and report the L² chain quantities.
    Rectmap(RectmapArgs),
    /// Search degree-12 harmonic polynomials for large ratios when p > 2.
    Explore(ExploreArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// One of t1, t3, t4, lemma1, kalaj, frazer, rz, rf-analytic.
    #[arg(long)]
    pub theorem: String,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Vec<f64>,
    /// Comma-separated diameter angles (radians); defaults to 0, π/6, π/4, π/2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    /// Comma-separated diameter counts for frazer; defaults to 1,2,3.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// random:count=..,seed=..,degree=..,decay=..,kind=..
    #[arg(long, conflicts_with = "named")]
    pub corpus: Option<String>,
    /// z, z-plus-zbar, constant[:c=..], extremal:p=..,r=.., rectangle:eps=..
    #[arg(long)]
    pub named: Option<String>,
    /// JSON output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the reports as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SharpnessArgs {
    #[arg(long)]
    pub p: f64,
    /// Increasing radii in (0, 1).
    #[arg(long, value_delimiter = ',', default_values_t = [0.9, 0.99, 0.999, 0.9999])]
    pub r: Vec<f64>,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub n: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct RectmapArgs {
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ExploreArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Sharpness(a) => commands::sharpness(a),
        Command::Constants(a) => commands::constants(a),
        Command::Rectmap(a) => commands::rectmap(a),
        Command::Explore(a) => commands::explore(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fejer: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
                CliError::NonConverged(_) => EXIT_NONCONVERGED,
                CliError::NoBracket(_) => EXIT_NO_BRACKET,
            })
        }
    }
}
