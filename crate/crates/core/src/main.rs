use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hmct::config::{parse_config, ExperimentConfig, Mode};
use hmct::experiment::{run, write_csv};
use hmct::sinr::NoiseModel;

#[derive(Parser)]
#[command(
    name = "hmct",
    version,
    about = "Max-SINR receiver experiments for hexagonal multicarrier transmission"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and numerically optimal receive-pulse offsets.
    Fig1(RunArgs),
    /// SINR of the projection, closed-form and upper-bound receivers.
    Fig2(RunArgs),
    /// SINR with a mismatched RMS delay spread estimate.
    Fig3(RunArgs),
    /// Custom sweep with the full parameter context per row.
    Sweep(RunArgs),
    /// Print the resolved configuration in config-file syntax.
    ShowConfig(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file (key = value).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a named preset instead of a file.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Output CSV path; defaults to `<mode>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = ["as-printed", "unit-energy"])]
    noise_model: Option<String>,
    /// Skip the Monte Carlo columns.
    #[arg(long)]
    no_monte_carlo: bool,
}

fn resolve(args: &RunArgs, mode: Option<Mode>) -> hmct::Result<ExperimentConfig> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => parse_config(path)?,
        (None, Some(name)) => ExperimentConfig::preset(name)?,
        (None, None) => ExperimentConfig::paper_sec4(),
    };
    if let Some(mode) = mode {
        cfg.mode = mode;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(nm) = &args.noise_model {
        cfg.noise_model = nm.parse::<NoiseModel>()?;
    }
    if args.no_monte_carlo {
        cfg.monte_carlo.enabled = false;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> hmct::Result<()> {
    let (args, mode) = match &cli.command {
        Command::Fig1(a) => (a, Some(Mode::Fig1)),
        Command::Fig2(a) => (a, Some(Mode::Fig2)),
        Command::Fig3(a) => (a, Some(Mode::Fig3)),
        Command::Sweep(a) => (a, Some(Mode::Custom)),
        Command::ShowConfig(a) => {
            print!("{}", resolve(a, None)?.to_config_string());
            return Ok(());
        }
    };
    let cfg = resolve(args, mode)?;
    let table = run(&cfg)?;
    let path = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.mode)));
    write_csv(&table, &path)?;
    eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
