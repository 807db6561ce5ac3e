use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use halting_core::runner::{recompute_summary, run_experiment, ExperimentConfig};
use halting_core::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG_INVALID: u8 = 2;
const EXIT_DEGRADED: u8 = 3;

#[derive(Parser)]
#[command(name = "halting", version, about = "Halting-time fluctuation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV records, summary.json and histogram.svg.
    Run(RunArgs),
    /// Recompute the summary of a finished run from its CSV files.
    Check {
        /// Config the run was made with.
        #[arg(long)]
        config: PathBuf,
        /// Output directory of the run.
        dir: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat `key = value` config file; flags below override its entries.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<String>,
    /// Comma-separated ensemble tags.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// A number, or `sqrt(n)*x`.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Any other config key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let mut o = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                o.push((k.to_string(), v));
            }
        };
        push("algorithm", self.algorithm.clone());
        push("ensembles", self.ensemble.clone());
        push("n", self.n.map(|v| v.to_string()));
        push("epsilon", self.epsilon.clone());
        push("trials", self.trials.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("workers", self.workers.map(|v| v.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("max_iter", self.max_iter.map(|v| v.to_string()));
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::ConfigInvalid(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            o.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(o)
    }

    fn config(&self) -> Result<ExperimentConfig, Error> {
        let text = match &self.config {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?,
            None => String::new(),
        };
        ExperimentConfig::parse_with_overrides(&text, &self.overrides()?)
    }
}

fn exit_for(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        Error::ConfigInvalid(_) => ExitCode::from(EXIT_CONFIG_INVALID),
        _ => ExitCode::from(EXIT_FAILURE),
    }
}

fn run(args: &RunArgs) -> Result<bool, Error> {
    let cfg = args.config()?;
    let bundle = run_experiment(&cfg)?;
    let stats = &bundle.summary.stats;
    for e in &stats.ensembles {
        match (e.mean, e.sd) {
            (Some(mean), Some(sd)) => println!(
                "{:>8}: {} trials, mean {mean:.4}, sd {sd:.4}, capped {}, failed {}",
                e.ensemble, e.trials, e.capped, e.failed
            ),
            _ => println!(
                "{:>8}: {} trials, capped {}, failed {}, no fluctuations ({})",
                e.ensemble,
                e.trials,
                e.capped,
                e.failed,
                e.error.as_deref().unwrap_or("unknown")
            ),
        }
    }
    for k in &stats.ks {
        println!("KS({}, {}) = {:.4}", k.a, k.b, k.distance);
    }
    if let Some(dir) = &bundle.out_dir {
        println!("wrote {}", dir.display());
    }
    if stats.degraded {
        eprintln!("warning: batch degraded (more than 1% of trials capped or failed)");
    }
    Ok(stats.degraded)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(&args) {
            Ok(false) => ExitCode::SUCCESS,
            Ok(true) => ExitCode::from(EXIT_DEGRADED),
            Err(e) => exit_for(&e),
        },
        Command::Check { config, dir } => {
            let result = ExperimentConfig::from_file(&config).and_then(|cfg| {
                let stored = halting_core::runner::read_summary(&dir)?;
                Ok(recompute_summary(&cfg, &dir)? == stored.stats)
            });
            match result {
                Ok(true) => {
                    println!("summary matches records");
                    ExitCode::SUCCESS
                }
                Ok(false) => {
                    eprintln!("summary does not match records");
                    ExitCode::from(EXIT_FAILURE)
                }
                Err(e) => exit_for(&e),
            }
        }
    }
}
