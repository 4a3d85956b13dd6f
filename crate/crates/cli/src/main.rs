//! `gofsim`: threshold calibration, goodness-of-fit tests on data files,
//! power studies and the full simulation-study reproduction.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cmd;
mod config;
mod models;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

/// Exit codes: 0 success, 2 configuration or data error, 3 numerical
/// failure, 4 missing calibration.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn calibration(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<gofsim::Error> for CliError {
    fn from(e: gofsim::Error) -> Self {
        use gofsim::Error::*;
        let code = match e {
            Divergence { .. } | NonIntegrable(_) | TooManyAborts { .. } => 3,
            MissingThreshold { .. } => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gofsim",
    version,
    about = "Goodness-of-fit tests for continuous-time processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate limit thresholds, finite-horizon Poisson thresholds or
    /// model-specific null thresholds.
    Calibrate(cmd::calibrate::CalibrateArgs),
    /// Test a path or event file against a null model.
    Test(cmd::test::TestArgs),
    /// Limit power curves of the CVM, KS and LAUMP tests.
    Power(cmd::power::PowerArgs),
    /// Reproduce the threshold and power figures of the simulation study.
    Figures(cmd::figures::FiguresArgs),
    /// Write a simulated path or event record as CSV.
    Simulate(cmd::simulate::SimulateArgs),
}

/// Options shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// key=value file with defaults for any flag of this command.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed; every output is a pure function of the seed and flags.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (0: all cores). Has no effect on results.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

fn run(args: Vec<OsString>) -> Result<(), CliError> {
    let mut command = Cli::command();
    let names: Vec<String> = command.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for name in names {
        command = command.mut_subcommand(name, |s| s.args_override_self(true));
    }
    let args = config::expand(args, &command)?;
    let matches = match command.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return if code == 0 {
                Ok(())
            } else {
                Err(CliError {
                    code: 2,
                    message: String::new(),
                })
            };
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::config(e.to_string()))?;
    match cli.command {
        Command::Calibrate(a) => cmd::with_threads(&a.common, || cmd::calibrate::run(&a)),
        Command::Test(a) => cmd::with_threads(&a.common, || cmd::test::run(&a)),
        Command::Power(a) => cmd::with_threads(&a.common, || cmd::power::run(&a)),
        Command::Figures(a) => cmd::with_threads(&a.common, || cmd::figures::run(&a)),
        Command::Simulate(a) => cmd::with_threads(&a.common, || cmd::simulate::run(&a)),
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
