mod commands;
mod config;
mod error;
mod logging;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Command-line driver for the bicons toolkit: profile-curve integration,
/// curvature-flow integration, structure-equation verification, isometry
/// classification, parameter sweeps, and plotting.
///
/// Exit codes: 0 success, 1 a verification or classification verdict failed,
/// 2 usage or precondition error, 3 numerical failure.
#[derive(Parser)]
#[command(name = "bicons", version, about)]
struct Cli {
    /// JSON config file; keys mirror the long flag names, flags override
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the admissible domain and curvature range of one family member
    FamilyInfo(commands::family_info::Args),
    /// Integrate the profile equation and write a CSV trace
    SolveF(commands::solve_f::Args),
    /// Integrate the curvature flow and write a CSV trace with recovered parameters
    SolveKappa(commands::solve_kappa::Args),
    /// Run the verification battery and emit a JSON report
    Verify(commands::verify::Args),
    /// Decide whether two parameter pairs name isometric members
    Isometry(commands::isometry::Args),
    /// Tabulate f_max and K_min over a parameter grid
    Sweep(commands::sweep::Args),
    /// Render columns of a CSV file as an SVG line plot
    Plot(commands::plot::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::load(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {}", err.message);
            return ExitCode::from(err.code);
        }
    };
    let result = match cli.command {
        Command::FamilyInfo(args) => commands::family_info::run(args, &cfg),
        Command::SolveF(args) => commands::solve_f::run(args, &cfg),
        Command::SolveKappa(args) => commands::solve_kappa::run(args, &cfg),
        Command::Verify(args) => commands::verify::run(args, &cfg),
        Command::Isometry(args) => commands::isometry::run(args, &cfg),
        Command::Sweep(args) => commands::sweep::run(args, &cfg),
        Command::Plot(args) => commands::plot::run(args, &cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
