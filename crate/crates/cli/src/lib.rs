//! The `ponds` experiment runner.

use std::ffi::OsString;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

use commands::*;

#[derive(Parser, Debug)]
#[command(
    name = "ponds",
    version,
    about = "Invasion percolation ponds and their critical-percolation comparisons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample first ponds of the origin and dump them
    SimulatePonds(SimulatePonds),
    /// Critical one-arm probabilities pi(n)
    EstimatePi(EstimatePi),
    /// Horizontal crossing probabilities sigma(n, m, p)
    EstimateSigma(EstimateSigma),
    /// Correlation lengths L(p, eps)
    #[command(name = "estimate-L")]
    EstimateL(EstimateL),
    /// Finite proxy for theta(p) alongside pi(L(p))
    EstimateTheta(EstimateTheta),
    /// Pond partition of B(n) for one field
    PondPartition(PondPartition),
    /// P(R_hat >= n) against pi(n)
    CompareRadius(CompareRadius),
    /// P(|V_hat| > s(n)) against the critical cluster volume tail
    CompareVolume(CompareVolume),
    /// Per-field duality checks between ponds, clusters and dual circuits
    CheckDualities(CheckDualities),
}

/// Exit code for usage and configuration errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for failures while running or writing output.
pub const EXIT_FAILURE: i32 = 1;

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::SimulatePonds(a) => &a.common,
            Command::EstimatePi(a) => &a.common,
            Command::EstimateSigma(a) => &a.common,
            Command::EstimateL(a) => &a.common,
            Command::EstimateTheta(a) => &a.common,
            Command::PondPartition(a) => &a.common,
            Command::CompareRadius(a) => &a.common,
            Command::CompareVolume(a) => &a.common,
            Command::CheckDualities(a) => &a.common,
        }
    }

    fn execute(&self) -> Result<()> {
        match self {
            Command::SimulatePonds(a) => simulate_ponds(a),
            Command::EstimatePi(a) => estimate_pi_cmd(a),
            Command::EstimateSigma(a) => estimate_sigma_cmd(a),
            Command::EstimateL(a) => estimate_l_cmd(a),
            Command::EstimateTheta(a) => estimate_theta_cmd(a),
            Command::PondPartition(a) => pond_partition_cmd(a),
            Command::CompareRadius(a) => compare_radius_cmd(a),
            Command::CompareVolume(a) => compare_volume_cmd(a),
            Command::CheckDualities(a) => check_dualities_cmd(a),
        }
    }
}

fn workers(cmd: &Command) -> Result<Option<usize>> {
    let common = cmd.common();
    let file = match &common.config {
        Some(p) => config::FileConfig::load(p)?.workers,
        None => None,
    };
    Ok(common.workers.or(file))
}

#[cfg(feature = "parallel")]
fn execute_with_workers(cmd: &Command, workers: Option<usize>) -> Result<()> {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| cmd.execute()),
        None => cmd.execute(),
    }
}

#[cfg(not(feature = "parallel"))]
fn execute_with_workers(cmd: &Command, _workers: Option<usize>) -> Result<()> {
    cmd.execute()
}

fn is_usage_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<config::Usage>()
            || matches!(
                c.downcast_ref::<invasion_ponds::Error>(),
                Some(
                    invasion_ponds::Error::Config(_)
                        | invasion_ponds::Error::Domain(_)
                        | invasion_ponds::Error::DegenerateBox
                )
            )
    })
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = workers(&cli.command).and_then(|w| {
        if w == Some(0) {
            config::usage!("--workers must be at least 1");
        }
        execute_with_workers(&cli.command, w)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ponds: {e:#}");
            if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}
