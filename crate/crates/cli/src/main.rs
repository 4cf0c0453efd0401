use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qmbp_cli::{emit, run, CliError, Pipeline, RunConfig};

/// Hardy index, decay bounds, eigenvalue and CTMC decay rate for a
/// quadratic Markov branching process.
#[derive(Debug, Parser)]
#[command(name = "qmbp", version)]
struct Args {
    /// JSON run config.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides `out_dir` in the config. Without either,
    /// the report goes to stdout and no curves are written.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Pipeline to run (repeatable); replaces the config list.
    #[arg(long = "pipeline", value_name = "NAME")]
    pipelines: Vec<Pipeline>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::from_path(&args.config)?;
    if !args.pipelines.is_empty() {
        cfg.pipelines = args.pipelines.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.out.is_some() {
        cfg.out_dir = args.out.clone();
    }
    cfg.expand_rates()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qmbp: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("qmbp: {e}");
            return ExitCode::from(2);
        }
    };
    match &cfg.out_dir {
        Some(dir) => {
            if let Err(e) = emit(&outcome, dir) {
                eprintln!("qmbp: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{}", outcome.report().to_json()),
    }
    for e in &outcome.errors {
        eprintln!("qmbp: {:?}: {}", e.pipeline, e.error);
    }
    for c in outcome.checks.iter().filter(|c| !c.pass) {
        eprintln!("qmbp: check {} failed: {}", c.name, c.detail);
    }
    if outcome.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
