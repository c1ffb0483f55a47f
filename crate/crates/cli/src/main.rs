//! `myoact`: synthesize or load sEMG recordings, extract features, and
//! evaluate classifiers.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::Run;

#[derive(Debug, Parser)]
#[command(name = "myoact", version, about = "Physical action classification from multi-channel sEMG")]
struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed, overriding `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory, overriding `out` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the synthetic recordings and their manifest under out/data.
    Synth,
    /// Envelope, segment and featurize every recording into out/features.
    Extract,
    /// Fit each configured classifier on all segments and save it to out/models.
    Train,
    /// Cross-validate the classifier x feature-subset grid and run the ELM protocol.
    Evaluate,
    /// Cross-validate with PCA at each configured size.
    SweepPca,
    /// Summarize existing reports as Markdown.
    Report,
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let run = Run::load(cli.config.as_deref(), cli.seed, cli.out)?;
    match cli.command {
        Command::Synth => commands::synth(&run),
        Command::Extract => commands::extract(&run),
        Command::Train => commands::train(&run),
        Command::Evaluate => commands::evaluate(&run),
        Command::SweepPca => commands::sweep_pca(&run),
        Command::Report => commands::report(&run),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
