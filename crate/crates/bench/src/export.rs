//! CSV artifacts. Floats are written in Rust's shortest round-trip form so
//! a file read back gives the same bits.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use morl_core::pareto::FrontApproximation;
use morl_core::stats::CdResult;

use crate::error::{io_err, BenchError, Result};
use crate::metrics::{MetricRow, MetricsReport};
use crate::record::RunRecord;

pub const METRICS_HEADER: [&str; 7] = ["algorithm", "run", "generation", "hv", "gd", "igd", "scalarized_best"];
pub const CD_HEADER: [&str; 4] = ["metric", "algorithm", "mean_rank", "group_ids"];

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(io_err(path))
}

pub fn write_metrics(path: &Path, rows: &[MetricRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(METRICS_HEADER)?;
    for r in rows {
        w.write_record([
            r.algorithm.clone(),
            r.run.to_string(),
            r.generation.to_string(),
            r.hv.to_string(),
            r.gd.to_string(),
            r.igd.to_string(),
            r.scalarized_best.to_string(),
        ])?;
    }
    finish(w, path)
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != METRICS_HEADER {
        return Err(BenchError::Invalid(format!("{}: unexpected header {header:?}", path.display())));
    }
    let bad = |line: u64, what: &str| BenchError::Invalid(format!("{}:{line}: bad {what}", path.display()));
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let int = |i: usize, what: &str| rec[i].parse::<usize>().map_err(|_| bad(line, what));
        let real = |i: usize, what: &str| rec[i].parse::<f64>().map_err(|_| bad(line, what));
        rows.push(MetricRow {
            algorithm: rec[0].to_string(),
            run: int(1, "run")?,
            generation: int(2, "generation")?,
            hv: real(3, "hv")?,
            gd: real(4, "gd")?,
            igd: real(5, "igd")?,
            scalarized_best: real(6, "scalarized_best")?,
        });
    }
    Ok(rows)
}

fn front_rows(w: &mut csv::Writer<fs::File>, scope: &str, algorithm: &str, front: &FrontApproximation) -> Result<()> {
    for p in front.points() {
        let mut row = vec![scope.to_string(), algorithm.to_string()];
        row.extend(p.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    Ok(())
}

/// `scope,algorithm,f1..fk`; the reference front uses algorithm `all`.
pub fn write_fronts(path: &Path, report: &MetricsReport) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["scope".to_string(), "algorithm".to_string()];
    header.extend((1..=report.objectives).map(|j| format!("f{j}")));
    w.write_record(&header)?;
    front_rows(&mut w, "reference", "all", &report.reference)?;
    for (name, front) in &report.algorithm_fronts {
        front_rows(&mut w, "algorithm", name, front)?;
    }
    finish(w, path)
}

fn read_cd(path: &Path) -> Result<Vec<[String; 4]>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != 4 {
            return Err(BenchError::Invalid(format!("{}: malformed row", path.display())));
        }
        rows.push([0, 1, 2, 3].map(|i| rec[i].to_string()));
    }
    Ok(rows)
}

/// Writes the CD result for `metric`, replacing earlier rows for the same
/// metric and keeping those of other metrics. `group_ids` lists the indices
/// of the groups (bars) containing the algorithm, separated by `;`.
pub fn write_cd(path: &Path, metric: &str, result: &CdResult) -> Result<()> {
    let mut rows: Vec<[String; 4]> = if path.exists() { read_cd(path)? } else { Vec::new() };
    rows.retain(|r| r[0] != metric);
    for (j, name) in result.algorithms.iter().enumerate() {
        let groups: Vec<String> = result.groups_of(j).iter().map(usize::to_string).collect();
        rows.push([
            metric.to_string(),
            name.clone(),
            result.mean_ranks[j].to_string(),
            groups.join(";"),
        ]);
    }
    let mut w = writer(path)?;
    w.write_record(CD_HEADER)?;
    for r in &rows {
        w.write_record(r)?;
    }
    finish(w, path)
}

pub fn write_timings(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["algorithm", "run", "status", "wall_seconds"])?;
    for r in records {
        let status = if r.is_completed() { "completed" } else { "aborted" };
        w.write_record([
            r.header.algorithm.clone(),
            r.header.run.to_string(),
            status.to_string(),
            r.wall_time.to_string(),
        ])?;
    }
    finish(w, path)
}

/// Mean and sample standard deviation over the finite values; NaN when
/// there are none.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let xs: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-(algorithm, generation) curves over runs, for plotting.
pub fn write_curves(path: &Path, rows: &[MetricRow]) -> Result<()> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), Vec<&MetricRow>> = BTreeMap::new();
    for r in rows {
        let a = match order.iter().position(|n| *n == r.algorithm) {
            Some(a) => a,
            None => {
                order.push(&r.algorithm);
                order.len() - 1
            }
        };
        groups.entry((a, r.generation)).or_default().push(r);
    }
    let mut w = writer(path)?;
    w.write_record([
        "algorithm",
        "generation",
        "runs",
        "hv_mean",
        "hv_std",
        "gd_mean",
        "gd_std",
        "igd_mean",
        "igd_std",
        "scalarized_best_mean",
        "scalarized_best_std",
    ])?;
    for ((a, generation), members) in &groups {
        let mut row = vec![order[*a].to_string(), generation.to_string(), members.len().to_string()];
        let columns: [fn(&MetricRow) -> f64; 4] = [|r| r.hv, |r| r.gd, |r| r.igd, |r| r.scalarized_best];
        for col in columns {
            let values: Vec<f64> = members.iter().map(|r| col(r)).collect();
            let (m, s) = mean_std(&values);
            row.push(m.to_string());
            row.push(s.to_string());
        }
        w.write_record(&row)?;
    }
    finish(w, path)
}
