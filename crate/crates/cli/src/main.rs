mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lindiff_cli::{config, render};

/// Exit status of a job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Usage = 1,
    Failed = 2,
}

#[derive(Debug, Parser)]
#[command(name = "lindiff", version, about = "Linear difference equations: solutions, residuals, growth estimates")]
#[command(args_override_self = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Pass/fail tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Seed for random sample points; without it samples are deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Suppress text output; the exit code still reports the outcome.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// JSON file with default flags (handled before parsing).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and verify the general solution of L f = A f.
    SolveEigen(commands::SolveEigenArgs),
    /// Residual of a candidate solution against an operator or recurrence.
    Residual(commands::ResidualArgs),
    /// Characteristic, order, deficiency and Borel estimates.
    Nevanlinna(commands::NevanlinnaArgs),
    /// Whether two functions share a value inside a disk.
    Share(commands::ShareArgs),
    /// Exact rational solutions of a polynomial-coefficient recurrence.
    Rational(commands::RationalArgs),
    /// Roots of a polynomial with multiplicities.
    Roots(commands::RootsArgs),
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(Status::Usage as u8);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::Usage as u8),
            };
        }
    };
    if !(cli.global.tol > 0.0 && cli.global.tol.is_finite()) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(Status::Usage as u8);
    }
    let result = match &cli.command {
        Command::SolveEigen(a) => commands::solve_eigen(a, &cli.global),
        Command::Residual(a) => commands::residual(a, &cli.global),
        Command::Nevanlinna(a) => commands::nevanlinna(a, &cli.global),
        Command::Share(a) => commands::share(a, &cli.global),
        Command::Rational(a) => commands::rational(a, &cli.global),
        Command::Roots(a) => commands::roots(a, &cli.global),
    };
    let status = match result {
        Ok(out) => {
            if cli.global.json {
                println!("{}", render::canonical_json(&out.json));
            } else if !cli.global.quiet {
                print!("{}", out.text);
            }
            out.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    };
    ExitCode::from(status as u8)
}
