//! Experiment runner: sweeps over `m`, seeded Monte Carlo runs, CSV output.

pub mod checks;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use checks::{oracle_suite, CheckOutcome, SuiteScale};

use crate::align::{pairwise_match_all, score, transitive_close, Matcher};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::{sample_family, seed, ModelSpec};

fn default_m_values() -> Vec<usize> {
    (2..=8).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Template; `m` is replaced by each entry of `m_values` and `seed` is
    /// the base seed.
    pub model: ModelSpec,
    #[serde(default = "default_m_values")]
    pub m_values: Vec<usize>,
    pub runs: usize,
    pub k: usize,
    #[serde(default)]
    pub enable_elimination: bool,
    /// Result CSV; defaults to the config path with a `.csv` extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::InvalidArgument("runs must be at least 1".into()));
        }
        if self.k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.m_values.is_empty() {
            return Err(Error::InvalidArgument("m_values must not be empty".into()));
        }
        for &m in &self.m_values {
            self.model.with_m(m).validate()?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn output_for(&self, config_path: &Path) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| config_path.with_extension("csv"))
    }
}

/// One row per `(m, run, pair)`. Pair indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub m: usize,
    pub run_id: usize,
    pub seed: u64,
    pub pair_i: usize,
    pub pair_j: usize,
    pub frac_matched_pre: f64,
    pub frac_matched_post: f64,
    pub frac_correct_pre: Option<f64>,
    pub frac_correct_post: Option<f64>,
    pub exact_all: bool,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Pre,
    Post,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Pre => "pre",
            Phase::Post => "post",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub m: usize,
    pub phase: Phase,
    pub mean_frac_matched: f64,
    /// Sample standard deviation over runs of the per-run mean across pairs;
    /// 0 for a single run.
    pub std_frac_matched: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<RunResult>,
    pub aggregates: Vec<AggregateRow>,
    /// Largest conflict count seen in any cell.
    pub max_conflicts: usize,
}

struct Cell {
    m: usize,
    run: usize,
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> Result<(Vec<RunResult>, usize)> {
    let start = Instant::now();
    let seed = seed::cell_seed(cfg.model.seed, cell.m, cell.run);
    let spec = cfg.model.with_m(cell.m).with_seed(seed);
    let family = sample_family(&spec)?;
    let pm = pairwise_match_all(&family, Matcher::Simulated, cfg.k, Execution::Sequential)?;
    let mut out = transitive_close(&pm, Execution::Sequential);
    if cfg.enable_elimination {
        out.pair_extended.complete_by_elimination();
        out.profile = out.pair_extended.profile();
    }
    let sc = score(&out, &family);
    let wall = start.elapsed().as_secs_f64() * 1e3;
    log::debug!("m = {} run = {} took {wall:.1} ms", cell.m, cell.run);
    let rows = sc
        .pairs
        .iter()
        .map(|p| RunResult {
            m: cell.m,
            run_id: cell.run,
            seed,
            pair_i: p.i + 1,
            pair_j: p.j + 1,
            frac_matched_pre: p.matched_pre,
            frac_matched_post: p.matched_post,
            frac_correct_pre: p.correct_pre,
            frac_correct_post: p.correct_post,
            exact_all: sc.exact_all,
            wall_time_ms: wall,
        })
        .collect();
    Ok((rows, sc.conflicts))
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn aggregate(rows: &[RunResult]) -> Vec<AggregateRow> {
    let mut ms: Vec<usize> = rows.iter().map(|r| r.m).collect();
    ms.dedup();
    let mut out = Vec::new();
    for m in ms {
        let mut runs: Vec<usize> = rows.iter().filter(|r| r.m == m).map(|r| r.run_id).collect();
        runs.dedup();
        for phase in [Phase::Pre, Phase::Post] {
            let per_run: Vec<f64> = runs
                .iter()
                .map(|&run| {
                    let fr: Vec<f64> = rows
                        .iter()
                        .filter(|r| r.m == m && r.run_id == run)
                        .map(|r| match phase {
                            Phase::Pre => r.frac_matched_pre,
                            Phase::Post => r.frac_matched_post,
                        })
                        .collect();
                    fr.iter().sum::<f64>() / fr.len() as f64
                })
                .collect();
            let (mean, std) = mean_std(&per_run);
            out.push(AggregateRow {
                m,
                phase,
                mean_frac_matched: mean,
                std_frac_matched: std,
                runs: per_run.len(),
            });
        }
    }
    out
}

/// Runs every `(m, run)` cell; cells are independent and each is
/// single-threaded. Rows come back ordered by `m_values` order, run, pair.
pub fn run_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let cells: Vec<Cell> = cfg
        .m_values
        .iter()
        .flat_map(|&m| (0..cfg.runs).map(move |run| Cell { m, run }))
        .collect();
    let results = exec.map_slice(&cells, |cell| run_cell(cfg, cell));
    let mut rows = Vec::new();
    let mut max_conflicts = 0;
    for r in results {
        let (cell_rows, conflicts) = r?;
        max_conflicts = max_conflicts.max(conflicts);
        rows.extend(cell_rows);
    }
    let aggregates = aggregate(&rows);
    Ok(ExperimentOutput {
        rows,
        aggregates,
        max_conflicts,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const RESULT_HEADER: &str =
    "m,run_id,seed,pair_i,pair_j,frac_matched_pre,frac_matched_post,frac_correct_pre,frac_correct_post,exact_all";
pub const AGGREGATE_HEADER: &str = "m,phase,mean_frac_matched,std_frac_matched,runs";
pub const TIMING_HEADER: &str = "m,run_id,seed,wall_time_ms";

impl ExperimentOutput {
    /// Result CSV; an empty correct fraction means nothing was matched.
    pub fn results_csv(&self) -> String {
        let mut s = String::from(RESULT_HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.m,
                r.run_id,
                r.seed,
                r.pair_i,
                r.pair_j,
                r.frac_matched_pre,
                r.frac_matched_post,
                opt(r.frac_correct_pre),
                opt(r.frac_correct_post),
                r.exact_all
            )
            .expect("writing to a String");
        }
        s
    }

    pub fn aggregate_csv(&self) -> String {
        let mut s = String::from(AGGREGATE_HEADER);
        s.push('\n');
        for a in &self.aggregates {
            writeln!(
                s,
                "{},{},{},{},{}",
                a.m,
                a.phase.label(),
                a.mean_frac_matched,
                a.std_frac_matched,
                a.runs
            )
            .expect("writing to a String");
        }
        s
    }

    pub fn timing_csv(&self) -> String {
        let mut s = String::from(TIMING_HEADER);
        s.push('\n');
        let mut last = None;
        for r in &self.rows {
            if last != Some((r.m, r.run_id)) {
                writeln!(s, "{},{},{},{:.3}", r.m, r.run_id, r.seed, r.wall_time_ms).expect("writing to a String");
                last = Some((r.m, r.run_id));
            }
        }
        s
    }

    /// Writes `<stem>.csv`, `<stem>.agg.csv` and `<stem>.timing.csv`.
    pub fn save(&self, csv_path: &Path) -> Result<OutputPaths> {
        let paths = OutputPaths::for_results(csv_path);
        if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        for (path, body) in [
            (&paths.results, self.results_csv()),
            (&paths.aggregates, self.aggregate_csv()),
            (&paths.timing, self.timing_csv()),
        ] {
            let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
            f.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
        }
        Ok(paths)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub results: PathBuf,
    pub aggregates: PathBuf,
    pub timing: PathBuf,
}

impl OutputPaths {
    pub fn for_results(csv_path: &Path) -> Self {
        let stem = csv_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let sibling = |suffix: &str| csv_path.with_file_name(format!("{stem}.{suffix}.csv"));
        OutputPaths {
            results: csv_path.to_path_buf(),
            aggregates: sibling("agg"),
            timing: sibling("timing"),
        }
    }
}
