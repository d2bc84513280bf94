use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subadd_lab::exponents::Verdict;
use subadd_lab::harness::{run_experiment, ExperimentConfig, ExperimentKind};
use subadd_lab::Error;

#[derive(Parser)]
#[command(
    name = "subadd-lab",
    version,
    about = "Monte Carlo experiments on subadditive processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scale sweep with exponent fits.
    Sweep(Opts),
    /// Block covariance, tail, variance and blocking diagnostics.
    Diagnose(Opts),
    /// Sweep plus the consistency verdict; exits 4 when inconsistent.
    Verify(Opts),
    /// Fractional Brownian motion counterexample run.
    Counterexample(Opts),
    /// Tracy-Widom F2 table.
    TwTable(Opts),
}

#[derive(Args)]
struct Opts {
    /// Experiment config (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `out_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; falls back to SUBADD_LAB_WORKERS, then the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config slack multiplier.
    #[arg(long)]
    slack: Option<f64>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Precondition(_) | Error::Io { .. } => 2,
        _ => 3,
    }
}

fn workers(opts: &Opts, config: &ExperimentConfig) -> Result<usize, Error> {
    if let Some(w) = opts.workers {
        return if w == 0 {
            Err(Error::config("workers", "must be >= 1"))
        } else {
            Ok(w)
        };
    }
    if let Ok(v) = std::env::var("SUBADD_LAB_WORKERS") {
        return match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(Error::config(
                "SUBADD_LAB_WORKERS",
                format!("expected a positive integer, got `{v}`"),
            )),
        };
    }
    Ok(config
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

fn run(kind: ExperimentKind, opts: Opts) -> Result<Option<Verdict>, Error> {
    let config = match &opts.config {
        Some(path) => ExperimentConfig::load(path)?,
        None if kind == ExperimentKind::TwTable || kind == ExperimentKind::Counterexample => {
            ExperimentConfig::new(kind)
        }
        None => {
            return Err(Error::config(
                "config",
                "--config is required for this subcommand",
            ))
        }
    };
    let mut config = config.resolve(kind)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if let Some(slack) = opts.slack {
        config.slack = slack;
    }
    let workers = workers(&opts, &config)?;
    let out_dir = opts
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("runs").join(&config.hash()[..12]));
    let outcome = run_experiment(&config, &out_dir, workers)?;
    println!(
        "{}",
        out_dir.join(subadd_lab::harness::MANIFEST_FILE).display()
    );
    if let Some(v) = outcome.verdict {
        println!(
            "verdict: {}",
            serde_json::to_value(v)
                .unwrap()
                .as_str()
                .unwrap_or_default()
        );
    }
    Ok(outcome.verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, opts) = match cli.command {
        Command::Sweep(o) => (ExperimentKind::Sweep, o),
        Command::Diagnose(o) => (ExperimentKind::Diagnose, o),
        Command::Verify(o) => (ExperimentKind::Verify, o),
        Command::Counterexample(o) => (ExperimentKind::Counterexample, o),
        Command::TwTable(o) => (ExperimentKind::TwTable, o),
    };
    match run(kind, opts) {
        Ok(Some(Verdict::Inconsistent)) if kind == ExperimentKind::Verify => ExitCode::from(4),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
