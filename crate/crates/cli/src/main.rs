// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fockgate::Model;

use fockgate_cli::commands;
use fockgate_cli::config::{RunConfig, Task};
use fockgate_cli::error::CliError;

#[derive(Parser)]
#[command(name = "fockgate", version, about = "Selective atom-oscillator gates: validation, sweeps and state synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a field, e.g. `--set physics.delta=40`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Restrict the run to one model.
    #[arg(long, global = true)]
    model: Option<Model>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run one UG_m gate and compare with its closed form.
    Gate,
    /// Fidelity and leakage over a grid of |Ω_L|/g.
    Sweep,
    /// Compile the target state into a gate plan and execute it.
    Synthesize,
    /// Run the identity and invariant suite.
    Validate,
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    for assignment in &cli.overrides {
        cfg.set(assignment)?;
    }
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(model) = cli.model {
        cfg.models = vec![model];
    }
    cfg.task = match cli.command {
        Command::Gate => Task::Gate,
        Command::Sweep => Task::Sweep,
        Command::Synthesize => Task::Synthesize,
        Command::Validate => Task::Validate,
    };
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = resolve(cli)?;
    match cfg.task {
        Task::Gate => commands::gate(&cfg).map(|_| true),
        Task::Sweep => commands::sweep(&cfg).map(|_| true),
        Task::Synthesize => commands::synthesize(&cfg).map(|_| true),
        Task::Validate => commands::validate(&cfg).map(|r| r.all_passed()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
