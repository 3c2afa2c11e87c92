//! Thin CLI over the runner: run trials or parameter sweeps and write the
//! CSV outputs. See the library's examples/ directory for programmatic use.

use clap::Parser;
use dualband::runner::{self, Algorithm, RunOptions, SweepVariable};
use dualband::scenario::{load_config, ScenarioConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "dualband",
    about = "Joint mmW/µW resource-block and power allocation simulator",
    version
)]
struct Cli {
    /// Scenario config file (flat key = value form); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Base RNG seed (overrides the config's rng_seed).
    #[arg(long)]
    seed: Option<u64>,

    /// Independent trials to run (seeds base, base+1, ...).
    #[arg(long, default_value_t = 1)]
    trials: usize,

    /// gb-eod, random-group+eod, round-robin or random.
    #[arg(long, default_value = "gb-eod")]
    algorithm: String,

    /// Sweep variable: num_ues or mmw_quota.
    #[arg(long)]
    sweep: Option<String>,

    /// Sweep values, comma separated (e.g. 20,25,30,35,40).
    #[arg(long, value_delimiter = ',')]
    values: Vec<usize>,

    /// Output directory for the CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Also dump the effective noise map (noise.csv).
    #[arg(long)]
    dump_noise: bool,

    /// Also dump the descent trace of the last trial (descent.csv).
    #[arg(long)]
    trace_descent: bool,

    /// Also dump the group assignment of the last trial (groups.csv).
    #[arg(long)]
    dump_groups: bool,
}

fn run(cli: Cli) -> Result<(), String> {
    let cfg = match &cli.config {
        Some(path) => load_config(path).map_err(|e| e.to_string())?,
        None => ScenarioConfig::default(),
    };
    let algorithm: Algorithm = cli.algorithm.parse()?;
    let sweep = match (&cli.sweep, cli.values.is_empty()) {
        (None, _) => None,
        (Some(_), true) => return Err("--sweep needs --values".to_string()),
        (Some(var), false) => {
            let variable: SweepVariable = var.parse()?;
            Some((variable, cli.values.clone()))
        }
    };
    let opts = RunOptions {
        seed: cli.seed,
        trials: cli.trials,
        algorithm,
        sweep,
        out_dir: cli.out.clone(),
        dump_noise: cli.dump_noise,
        trace_descent: cli.trace_descent,
        dump_groups: cli.dump_groups,
    };
    let summary = runner::execute(&cfg, &opts).map_err(|e| e.to_string())?;
    println!("{}", summary.message);
    for file in &summary.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
