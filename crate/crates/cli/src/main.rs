//! `svito`: experiment runner for the set-valued stochastic calculus
//! engine.
//!
//! Exit codes: 0 all checks pass, 2 a check failed, 3 inconclusive,
//! 64 usage/configuration error, 1 unexpected I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use svito_cli::accept;
use svito_cli::commands::{self, CommandError, Outcome};

#[derive(Parser)]
#[command(
    name = "svito",
    about = "Set-valued stochastic calculus experiments: Hukuhara algebra checks, \
             set-valued Ito isometry/formula verification, and BSDE solving",
    version
)]
struct Cli {
    /// Root directory for run outputs (each run gets a content-addressed
    /// subdirectory).
    #[arg(long, global = true, default_value = "svito-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized law suite for the Hukuhara/Minkowski algebra.
    AlgebraCheck {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Two-sided set-valued Ito isometry check for one interval.
    Isometry {
        /// Interval literal, e.g. "[0,1]".
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 128)]
        steps: usize,
        #[arg(long, default_value_t = 16)]
        selections: usize,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value = "mix")]
        recipe: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Export the first N paths' Brownian increments as CSV.
        #[arg(long, default_value_t = 0)]
        dump_increments: usize,
        /// Export a membership audit of the selection family over the
        /// first N paths.
        #[arg(long, default_value_t = 0)]
        audit_family: usize,
    },
    /// Transformation-identity verification for a set-valued Ito process.
    ItoVerify {
        /// Transform name: identity, square, or time-scaled.
        #[arg(long, default_value = "square")]
        phi: String,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        /// Diffusion coefficient interval literal.
        #[arg(long, default_value = "[0.5,1]")]
        f: String,
        /// Drift coefficient interval literal.
        #[arg(long, default_value = "[0,0]")]
        g: String,
        #[arg(long, default_value_t = 1_024)]
        steps: usize,
        #[arg(long, default_value_t = 256)]
        paths: usize,
        #[arg(long, default_value_t = 8)]
        selections: usize,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value = "support")]
        recipe: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Picard solve of a set-valued BSDE described by a JSON config.
    BsdeSolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the full canned acceptance suite.
    AcceptAll {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Reduced sizes for smoke runs and determinism checks.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    // Thread count is the single environment override.
    if let Ok(threads) = std::env::var("SVITO_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("usage error: SVITO_THREADS must be a positive integer");
                return ExitCode::from(64);
            }
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are not usage errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };

    let outcome = match run(cli) {
        Ok(outcome) => outcome,
        Err(CommandError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            return ExitCode::from(64);
        }
        Err(CommandError::Io(e)) => {
            eprintln!("io error: {e}");
            return ExitCode::from(1);
        }
    };
    match outcome {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::CheckFailed => ExitCode::from(2),
        Outcome::Inconclusive => ExitCode::from(3),
    }
}

fn run(cli: Cli) -> Result<Outcome, CommandError> {
    match cli.command {
        Command::AlgebraCheck {
            trials,
            max_dim,
            seed,
        } => commands::algebra_check(&cli.out, trials, max_dim, seed),
        Command::Isometry {
            set,
            paths,
            steps,
            selections,
            horizon,
            recipe,
            seed,
            dump_increments,
            audit_family,
        } => commands::isometry(
            &cli.out,
            &set,
            paths,
            steps,
            selections,
            horizon,
            &recipe,
            seed,
            dump_increments,
            audit_family,
        ),
        Command::ItoVerify {
            phi,
            x0,
            f,
            g,
            steps,
            paths,
            selections,
            horizon,
            recipe,
            seed,
        } => commands::ito_verify(
            &cli.out, &phi, x0, &f, &g, paths, steps, selections, horizon, &recipe, seed,
        ),
        Command::BsdeSolve { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                CommandError::Usage(format!("cannot read config {}: {e}", config.display()))
            })?;
            commands::bsde_solve(&cli.out, &text)
        }
        Command::AcceptAll { seed, quick } => {
            let (outcome, _) = accept::accept_all(&cli.out, seed, quick)?;
            Ok(outcome)
        }
    }
}
