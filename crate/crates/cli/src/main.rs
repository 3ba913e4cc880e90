//! `nua` command-line driver.
//!
//! Exit codes: 0 converged, 1 bad input or I/O failure, 2 infeasible
//! (a queue saturates, or a point has no coverage), 3 iteration limit.
//! Log level comes from `NUA_LOG` (default `warn`).

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::EXIT_ERROR;
use crate::config::{Flags, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "nua", version, about = "Energy-aware load balancing for cache-enabled small cell networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated deployment to <out>/scenario.json
    Generate(Flags),
    /// Run one scheme and write results.json, per_bs.csv, trace.csv, coverage.csv, stations.csv
    Run(Flags),
    /// Run the scheme once per value of --sweep and write sweep.csv
    Sweep(Flags),
    /// Run nua, nua_nc and drb on one network and write compare.csv
    Compare(Flags),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NUA_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (flags, cmd): (&Flags, fn(&RunConfig) -> nua_core::Result<i32>) = match &cli.command {
        Command::Generate(f) => (f, commands::cmd_generate),
        Command::Run(f) => (f, commands::cmd_run),
        Command::Sweep(f) => (f, commands::cmd_sweep),
        Command::Compare(f) => (f, commands::cmd_compare),
    };
    let code = RunConfig::resolve(flags).and_then(|cfg| cmd(&cfg)).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        commands::error_exit_code(&e)
    });
    ExitCode::from(code as u8)
}
