//! `devrep`: batch runs of the reputation model.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use devrep_core::cli::{self, CliError, Command, ConfigError, Scenario};

#[derive(Parser)]
#[command(name = "devrep", version, about = "Reputation dynamics under lying indirect reports")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Regime, thresholds and fixed points
    Analyze(Common),
    /// One simulated path: trajectory CSV and plot
    Simulate(Common),
    /// Seeded ensemble with per-run statistics
    Montecarlo(Common),
    /// Fixed points across a grid of `d` or `pbar`
    Sweep(Common),
    /// Piecewise mean-field solution with a simulated overlay
    Ode(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (`key = value` lines)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set pbar=0.3`; repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory (overrides `out_dir`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the stdout summary
    #[arg(long)]
    quiet: bool,
}

fn load(common: &Common) -> Result<cli::ResolvedConfig, CliError> {
    let mut sc = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Scenario::parse(&text)?
        }
        None => Scenario::default(),
    };
    for pair in &common.set {
        sc.set_pair(pair)?;
    }
    if let Some(out) = &common.out {
        let out = out.to_str().ok_or_else(|| ConfigError {
            line: None,
            key: Some("out_dir".into()),
            message: "output path is not valid UTF-8".into(),
        })?;
        sc.set("out_dir", out)?;
    }
    Ok(sc.resolve()?)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (cmd, common) = match &args.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::Simulate(c) => (Command::Simulate, c),
        Cmd::Montecarlo(c) => (Command::Montecarlo, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
        Cmd::Ode(c) => (Command::Ode, c),
    };
    match load(common).and_then(|cfg| cli::run(cmd, &cfg, common.quiet)) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("devrep {}: {e}", cmd.name());
            ExitCode::from(e.exit_code())
        }
    }
}
