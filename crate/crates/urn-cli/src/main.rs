use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use urn_cli::config::{parse_config, ExperimentSpec};
use urn_cli::experiment::run_experiment;

/// Two-restaurant queue game: run ensembles and write distribution CSVs.
#[derive(Parser)]
#[command(name = "urn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file and write its CSV outputs.
    Run {
        /// Experiment file (key = value lines plus [histogram] sections).
        spec_file: PathBuf,
        /// Override the file's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the file's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for day-level parallelism (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate an experiment file without running it.
    Validate {
        /// Experiment file to check.
        spec_file: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { spec_file, seed, out, threads } => {
            let mut spec = load_spec(&spec_file)?;
            if let Some(seed) = seed {
                spec.config.seed = seed;
            }
            if let Some(out) = out {
                spec.output_dir = out;
            }
            let report = match threads {
                Some(threads) => rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .context("cannot build thread pool")?
                    .install(|| run_experiment(&spec)),
                None => run_experiment(&spec),
            }?;
            println!(
                "{}: {} files in {:.2?}",
                spec.name,
                report.files.len(),
                report.ensemble.elapsed
            );
            Ok(())
        }
        Command::Validate { spec_file } => {
            let spec = load_spec(&spec_file)?;
            println!(
                "{}: ok ({} histogram request(s), {} days of {} agents)",
                spec.name,
                spec.histograms.len(),
                spec.config.n_days,
                spec.config.n_agents
            );
            Ok(())
        }
    }
}

fn load_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let spec =
        parse_config(&text).with_context(|| format!("invalid experiment file {}", path.display()))?;
    Ok(spec)
}
