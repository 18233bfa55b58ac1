//! `ndtop`: simulate, classify, generate and probe equilibria of the free
//! n-dimensional rigid body.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod exit;
mod output;

use clap::{ArgGroup, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CODES: &str = "Exit codes:
  0  success
  2  unreadable or invalid input (schema, body, recipe, parameters)
  3  numerical abort (non-finite state, step guard, solver failure)
  4  the matrix is not an equilibrium (residual printed)
  5  ambiguous frequency clustering";

#[derive(Debug, Parser)]
#[command(name = "ndtop", version, about = "Free n-dimensional rigid body toolkit", after_help = EXIT_CODES)]
pub struct Cli {
    /// Relative equilibrium residual tolerance.
    #[arg(long, global = true, default_value_t = ndtop::equilibria::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for random structures and perturbations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for output files.
    #[arg(long, global = true, env = "NDTOP_OUTPUT_DIR")]
    pub output_dir: Option<PathBuf>,
    /// Log more (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a scenario; writes the trajectory CSV and an invariant drift summary.
    Simulate {
        /// Scenario JSON.
        scenario: PathBuf,
    },
    /// Print the normal form of an equilibrium momentum.
    Classify {
        /// Momentum matrix JSON (`kind: "skew"`).
        matrix: PathBuf,
        /// Body JSON (eigenvalues or a symmetric matrix).
        body: PathBuf,
        /// Relative gap separating distinct frequencies.
        #[arg(long, default_value_t = ndtop::equilibria::DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
    },
    /// Realize a recipe; writes momentum.json and structure.json.
    Generate {
        /// Generator recipe JSON.
        recipe: PathBuf,
        /// Body JSON (eigenvalues or a symmetric matrix).
        body: PathBuf,
    },
    /// Linearization spectrum, orbit kernel or perturbation probe at an equilibrium.
    #[command(group(ArgGroup::new("mode").required(true).args(["probe", "kernel", "spectrum"])))]
    Stability {
        /// Momentum matrix JSON (`kind: "skew"`).
        matrix: PathBuf,
        /// Body JSON (eigenvalues or a symmetric matrix).
        body: PathBuf,
        /// Perturbation growth experiment (writes probe.json and growth.csv).
        #[arg(long)]
        probe: bool,
        /// Orbit-tangent equilibrium kernel (writes kernel.json).
        #[arg(long)]
        kernel: bool,
        /// Linearization and its spectrum (writes spectrum.json).
        #[arg(long)]
        spectrum: bool,
        /// Relative singular value threshold.
        #[arg(long, default_value_t = ndtop::stability::DEFAULT_RANK_TOL)]
        rank_tol: f64,
        /// Probe perturbation size.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        /// Probe time horizon.
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        /// Escape threshold as a multiple of eps.
        #[arg(long, default_value_t = 100.0)]
        exit_factor: f64,
        /// Probe step size (default min(1e-2, 0.05/‖Ω‖)).
        #[arg(long)]
        dt: Option<f64>,
        /// Probe curve sampling, in steps.
        #[arg(long, default_value_t = 10)]
        record_every: usize,
        /// Orbit step for the residual decay check along kernel directions.
        #[arg(long, default_value_t = 1e-4)]
        decay_step: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ndtop: {e}");
            e.exit_code()
        }
    }
}
