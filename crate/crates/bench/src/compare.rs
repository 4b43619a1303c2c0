//! Friedman/Nemenyi comparison of final-generation metrics across result
//! directories.

use std::collections::BTreeMap;
use std::path::Path;

use morl_core::stats::{compare, CdResult, ScoreTable};

use crate::error::{BenchError, Result};
use crate::export::read_metrics;
use crate::metrics::MetricRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Metric {
    Hv,
    Gd,
    Igd,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Hv => "hv",
            Metric::Gd => "gd",
            Metric::Igd => "igd",
        }
    }

    pub fn higher_is_better(self) -> bool {
        self == Metric::Hv
    }

    fn value(self, row: &MetricRow) -> f64 {
        match self {
            Metric::Hv => row.hv,
            Metric::Gd => row.gd,
            Metric::Igd => row.igd,
        }
    }
}

/// What counts as one dataset (row) of the score table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Pooling {
    /// Every (directory, run) cell.
    #[default]
    Runs,
    /// One row per directory, averaging its runs.
    Problems,
}

/// Final-generation values of one directory: algorithm order plus, per run,
/// one value per algorithm. Runs missing an algorithm or holding a
/// non-finite value are dropped.
fn final_cells(rows: &[MetricRow], metric: Metric) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut algorithms: Vec<String> = Vec::new();
    for r in rows {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm.clone());
        }
    }
    let last = rows.iter().map(|r| r.generation).max().unwrap_or(0);
    let mut by_run: BTreeMap<usize, Vec<Option<f64>>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.generation == last) {
        let a = algorithms.iter().position(|n| *n == r.algorithm).expect("listed above");
        by_run.entry(r.run).or_insert_with(|| vec![None; algorithms.len()])[a] = Some(metric.value(r));
    }
    let cells = by_run
        .into_values()
        .filter_map(|v| v.into_iter().collect::<Option<Vec<f64>>>())
        .filter(|v| v.iter().all(|x| x.is_finite()))
        .collect();
    (algorithms, cells)
}

/// Builds the score table from per-directory metric rows.
pub fn score_table(dirs: &[Vec<MetricRow>], metric: Metric, pooling: Pooling) -> Result<ScoreTable> {
    let mut algorithms: Option<Vec<String>> = None;
    let mut scores = Vec::new();
    for (i, rows) in dirs.iter().enumerate() {
        let (names, cells) = final_cells(rows, metric);
        match &algorithms {
            None => algorithms = Some(names),
            Some(a) if *a == names => {}
            Some(a) => {
                return Err(BenchError::Invalid(format!(
                    "directory {i} has algorithms {names:?}, expected {a:?}"
                )))
            }
        }
        if cells.is_empty() {
            continue;
        }
        match pooling {
            Pooling::Runs => scores.extend(cells),
            Pooling::Problems => {
                let m = cells[0].len();
                let n = cells.len() as f64;
                scores.push((0..m).map(|j| cells.iter().map(|c| c[j]).sum::<f64>() / n).collect());
            }
        }
    }
    let algorithms = algorithms.ok_or_else(|| BenchError::Invalid("no result directories".into()))?;
    Ok(ScoreTable::new(algorithms, scores, metric.higher_is_better())?)
}

/// Loads `metrics.csv` from each directory and runs the comparison.
pub fn compare_dirs(dirs: &[&Path], metric: Metric, alpha: f64, pooling: Pooling) -> Result<CdResult> {
    let rows = dirs
        .iter()
        .map(|d| read_metrics(&d.join("metrics.csv")))
        .collect::<Result<Vec<_>>>()?;
    let table = score_table(&rows, metric, pooling)?;
    Ok(compare(&table, alpha)?)
}
