//! Experiment harness for the `morl-core` optimizers: configuration parsing,
//! seeded (optionally parallel) execution, JSON-lines run records, indicator
//! series, CSV export and Friedman/Nemenyi comparison.
//!
//! A result directory holds:
//!
//! * `config.txt`: canonical form of the experiment config
//! * `records/<ALG>_run<r>.jsonl`: one run record per (algorithm, run)
//! * `metrics.csv`, `fronts.csv`: indicator series and fronts
//! * `timings.csv`: wall-clock time per run (the only nondeterministic file)
//! * `cd.csv`, `curves.csv`: written by the `stats` and `export-plots` commands

pub mod compare;
pub mod config;
mod error;
pub mod export;
pub mod metrics;
pub mod record;
pub mod runner;

use std::fs;
use std::path::Path;

pub use error::{BenchError, Result};

use config::ExperimentConfig;
use error::io_err;
use metrics::{compute_metrics, MetricsReport};
use record::{read_records, RunRecord, RECORDS_DIR};

/// Outcome of [`run_command`].
#[derive(Debug)]
pub struct RunSummary {
    pub records: Vec<RunRecord>,
    pub metrics: MetricsReport,
}

/// Runs an experiment and writes records, metrics, fronts and timings to
/// `out`.
pub fn run_command(config: &ExperimentConfig, out: &Path, jobs: usize) -> Result<RunSummary> {
    let records_dir = out.join(RECORDS_DIR);
    fs::create_dir_all(&records_dir).map_err(io_err(&records_dir))?;
    let config_path = out.join("config.txt");
    fs::write(&config_path, config.to_text()).map_err(io_err(&config_path))?;
    let records = runner::run_experiment(config, jobs)?;
    for r in &records {
        r.write_to(&records_dir)?;
    }
    export::write_timings(&out.join("timings.csv"), &records)?;
    let metrics = write_metrics(out, &records)?;
    Ok(RunSummary { records, metrics })
}

fn write_metrics(dir: &Path, records: &[RunRecord]) -> Result<MetricsReport> {
    let report = compute_metrics(records)?;
    export::write_metrics(&dir.join("metrics.csv"), &report.rows)?;
    export::write_fronts(&dir.join("fronts.csv"), &report)?;
    Ok(report)
}

/// Recomputes `metrics.csv` and `fronts.csv` from the records in `dir`.
pub fn metrics_command(dir: &Path) -> Result<MetricsReport> {
    write_metrics(dir, &read_records(dir)?)
}

/// Writes `curves.csv` from the `metrics.csv` in `dir`.
pub fn export_plots_command(dir: &Path) -> Result<()> {
    let rows = export::read_metrics(&dir.join("metrics.csv"))?;
    export::write_curves(&dir.join("curves.csv"), &rows)
}
