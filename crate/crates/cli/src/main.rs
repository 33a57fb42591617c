//! eoscan — energy-operator scans and identity audits for damped wave
//! families from the command line.
//!
//! Every command resolves one configuration (defaults → config file →
//! preset flag → individual flags), writes machine-readable reports into
//! the output directory, and echoes the fully resolved configuration next
//! to them so any run can be repeated exactly. Outputs carry no timestamps:
//! identical configurations produce byte-identical files.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, Overrides};

#[derive(Parser)]
#[command(
    name = "eoscan",
    version,
    about = "Energy-operator scans and identity audits for damped wave families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Scan derivative energies across chain levels (CSV + JSON + config echo)
    Scan,
    /// Evaluate the normalized wave-operator residual over a power/order grid
    Dispersion,
    /// Classify the one-step energy continuation and extrapolate it
    Duplicate,
    /// Audit the derivative-of-power identities on built-in functions
    DecomposeCheck,
    /// Scan operator kernels and decay bounds for the configured slice
    Membership,
}

fn run(cli: &Cli) -> eo_core::error::Result<u8> {
    let cfg = resolve(&cli.overrides)?;
    let out_dir = cli
        .overrides
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("EOSCAN_OUTDIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Scan => commands::scan(&cfg, &out_dir),
        Command::Dispersion => commands::dispersion(&cfg, &out_dir),
        Command::Duplicate => commands::duplicate(&cfg, &out_dir),
        Command::DecomposeCheck => commands::decompose_check(&cfg, &out_dir),
        Command::Membership => commands::membership(&cfg, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("eoscan: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
