use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use multialign::harness::{oracle_suite, run_experiment, ExperimentConfig, SuiteScale};
use multialign::sampling::{sample_family, ModelSpec};
use multialign::thresholds::{phase_grid, Range, Region};
use multialign::Execution;

#[derive(Parser)]
#[command(version, about = "Correlated graph families, k-core alignment and transitive closure experiments")]
struct Cli {
    /// Run everything on the current thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a family from a model spec and write edge lists plus truth.json.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the spec.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run an experiment config; writes <stem>.csv, <stem>.agg.csv, <stem>.timing.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a (C, s) grid for fixed m and write the region CSV.
    PhaseGrid {
        #[arg(long)]
        m: usize,
        /// start:stop:step
        #[arg(long)]
        c: Range,
        /// start:stop:step
        #[arg(long)]
        s: Range,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the deterministic oracle checks and print a pass/fail table.
    OracleSuite {
        #[arg(long)]
        quick: bool,
    },
}

fn run(cli: Cli) -> multialign::Result<bool> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match cli.command {
        Command::Generate { spec, out, seed } => {
            let mut spec = ModelSpec::load(&spec)?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let fam = sample_family(&spec)?;
            fam.export(&out)?;
            log::info!("wrote {} graphs with n = {} to {}", fam.m(), fam.n(), out.display());
        }
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let csv = out.unwrap_or_else(|| cfg.output_for(&config));
            let result = run_experiment(&cfg, exec)?;
            if result.max_conflicts > 0 {
                log::warn!("closure reported {} conflicts", result.max_conflicts);
            }
            let paths = result.save(&csv)?;
            log::info!("wrote {}, {}, {}", paths.results.display(), paths.aggregates.display(), paths.timing.display());
        }
        Command::PhaseGrid { m, c, s, out } => {
            if m < 2 {
                return Err(multialign::Error::InvalidArgument("m must be at least 2".into()));
            }
            let grid = phase_grid(c, s, m, exec);
            match out {
                Some(path) => grid.save_csv(&path)?,
                None => grid
                    .write_csv(std::io::stdout().lock())
                    .map_err(|e| multialign::Error::InvalidArgument(format!("writing to stdout: {e}")))?,
            }
            for region in [Region::Impossible, Region::MultiOnly, Region::PairwisePossible, Region::Boundary] {
                log::info!("{region}: {} cells", grid.count(region));
            }
        }
        Command::OracleSuite { quick } => {
            let scale = if quick { SuiteScale::Quick } else { SuiteScale::Full };
            let outcomes = oracle_suite(scale, exec);
            let width = outcomes.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &outcomes {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status}  {:width$}  {:>9.1} ms  {}", c.name, c.elapsed_ms, c.detail);
            }
            return Ok(outcomes.iter().all(|c| c.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
