use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use infocomm::harness::{run, Command, Overrides};
use infocomm::Execution;

/// Production/consumption equilibria in information-sharing communities.
#[derive(Parser)]
#[command(name = "infocomm", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Overrides settings.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides settings.eps.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Overrides settings.grid_points.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Overrides settings.trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args)]
struct Io {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the analyses listed in the config at every eta point.
    Analyze(Io),
    /// Tabulate closed forms over the eta sweep (sweep.csv, sweep.svg).
    Sweep(Io),
    /// Best-response dynamics from the configured initial profile.
    Dynamics(Io),
    /// Brute-force grid search against the closed forms.
    Oracle(Io),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, io) = match cli.command {
        Cmd::Analyze(io) => (Command::Analyze, io),
        Cmd::Sweep(io) => (Command::Sweep, io),
        Cmd::Dynamics(io) => (Command::Dynamics, io),
        Cmd::Oracle(io) => (Command::Oracle, io),
    };
    let overrides = Overrides {
        seed: cli.seed,
        eps: cli.eps,
        grid_points: cli.grid_points,
        trials: cli.trials,
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let outcome = run(exec, command, &io.config, io.out.as_deref(), overrides);
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    if let Some(m) = &outcome.message {
        eprintln!("{m}");
    }
    ExitCode::from(outcome.status as u8)
}
