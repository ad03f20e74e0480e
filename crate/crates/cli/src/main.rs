use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use deadwater_cli::{commands, load_config};

#[derive(Parser)]
#[command(name = "deadwater", version, about = "Ship-forced internal waves in a two-layer fluid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical speed, regime and wake geometry for the configured speed.
    Params(Common),
    /// Steady forced response in the ship frame.
    Steady(Common),
    /// Time-steps the scenario and writes eta snapshots.
    Simulate(Common),
    /// Searches for the smallest quiet damping epsilon.
    TuneEpsilon(Common),
    /// Dyadic dt sweep against the exact constant-speed solution.
    Convergence(Common),
    /// Space-time Fourier spectrum of the snapshots.
    Spectrum(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Reserved; the pipeline uses no randomness.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (Command::Params(common)
    | Command::Steady(common)
    | Command::Simulate(common)
    | Command::TuneEpsilon(common)
    | Command::Convergence(common)
    | Command::Spectrum(common)) = &cli.command;

    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let _ = common.seed;
    let cfg = load_config(&common.config)?;
    let dir = common.output.clone().unwrap_or_else(|| cfg.output_dir.clone());

    let text = match cli.command {
        Command::Params(_) => commands::params(&cfg)?,
        Command::Steady(_) => commands::steady(&cfg, &dir)?,
        Command::Simulate(_) => commands::simulate(&cfg, &dir)?,
        Command::TuneEpsilon(_) => commands::tune(&cfg, &dir)?,
        Command::Convergence(_) => commands::convergence(&cfg, &dir)?,
        Command::Spectrum(_) => commands::spectrum(&cfg, &dir)?,
    };
    print!("{text}");
    Ok(())
}
