//! Command-line front end for the dyadic interaction toolkit: ingest contact
//! streams, fit permutation regressions, summarize node-level measures,
//! evaluate selection surfaces, and generate synthetic studies.

pub mod commands;
pub mod fmt;
pub mod io;
pub mod parallel;
pub mod pipeline;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "dyadnet",
    version,
    about = "Dyadic interaction networks: ingest, fit, describe, project, synthesize",
    propagate_version = true
)]
pub struct Cli {
    /// Cap the number of worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Turn a contact stream into a dyadic duration matrix and exposure report.
    Ingest(commands::ingest::IngestArgs),
    /// Fit a permutation regression of a dyadic matrix on model terms.
    Fit(commands::fit::FitArgs),
    /// Node-level summary statistics and correlation table.
    Descriptives(commands::descriptives::DescriptivesArgs),
    /// Evaluate fitted coefficients as a selection surface over a score grid.
    Selection(commands::selection::SelectionArgs),
    /// Generate a synthetic study with planted coefficients.
    Synth(commands::synth::SynthArgs),
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    parallel::install_thread_pool(cli.threads)?;
    match cli.command {
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::Descriptives(args) => commands::descriptives::run(args),
        Command::Selection(args) => commands::selection::run(args),
        Command::Synth(args) => commands::synth::run(args),
    }
}
