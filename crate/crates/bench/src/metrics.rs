//! Indicator series and reference fronts computed from run records.

use log::warn;
use morl_core::indicators::{build_reference_front, gd, igd, ReferenceScale};
use morl_core::pareto::{nondominated_filter, FrontApproximation};

use crate::error::{BenchError, Result};
use crate::record::RunRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub algorithm: String,
    pub run: usize,
    pub generation: usize,
    pub hv: f64,
    pub gd: f64,
    pub igd: f64,
    pub scalarized_best: f64,
}

#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub rows: Vec<MetricRow>,
    /// Nondominated union of the final populations of all completed runs.
    pub reference: FrontApproximation,
    /// Per-algorithm unions of final populations, in roster order.
    pub algorithm_fronts: Vec<(String, FrontApproximation)>,
    pub objectives: usize,
    pub diagnostics: Vec<String>,
}

/// Builds the fronts from completed runs and scores every recorded
/// generation of every run against the shared reference front.
///
/// When the reference front is degenerate (equal best and worst value in an
/// objective) the normalized hypervolume is undefined: it is reported as NaN
/// with a diagnostic, while GD and IGD are still computed.
pub fn compute_metrics(records: &[RunRecord]) -> Result<MetricsReport> {
    let finals: Vec<(&str, Vec<&[f64]>)> = records
        .iter()
        .filter(|r| r.is_completed())
        .filter_map(|r| r.final_generation().map(|g| (r.header.algorithm.as_str(), g.objectives())))
        .collect();
    if finals.is_empty() {
        return Err(BenchError::Invalid("no completed run to build a reference front from".into()));
    }
    let all: Vec<&[&[f64]]> = finals.iter().map(|(_, pts)| pts.as_slice()).collect();
    let reference = build_reference_front(&all)?;

    let mut algorithm_fronts = Vec::new();
    let mut names: Vec<&str> = Vec::new();
    for (name, _) in &finals {
        if !names.contains(name) {
            names.push(name);
        }
    }
    for name in names {
        let mine: Vec<&[&[f64]]> = finals
            .iter()
            .filter(|(n, _)| *n == name)
            .map(|(_, pts)| pts.as_slice())
            .collect();
        algorithm_fronts.push((name.to_string(), build_reference_front(&mine)?));
    }

    let mut diagnostics = Vec::new();
    let scale = match ReferenceScale::new(&reference) {
        Ok(s) => Some(s),
        Err(e) => {
            let msg = format!("reference front is degenerate ({e}); hv reported as NaN");
            warn!("{msg}");
            diagnostics.push(msg);
            None
        }
    };

    let mut rows = Vec::new();
    for r in records {
        for g in &r.generations {
            let front = nondominated_filter(&g.objectives())?;
            let hv = match &scale {
                Some(s) => s.hypervolume(front.points())?,
                None => f64::NAN,
            };
            rows.push(MetricRow {
                algorithm: r.header.algorithm.clone(),
                run: r.header.run,
                generation: g.generation,
                hv,
                gd: gd(front.points(), reference.points())?,
                igd: igd(front.points(), reference.points())?,
                scalarized_best: g.best_scalar(),
            });
        }
    }
    Ok(MetricsReport {
        rows,
        objectives: reference.objectives(),
        reference,
        algorithm_fronts,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{GenerationRecord, IndividualRecord, RecordHeader, RunStatus};

    fn record(algorithm: &str, run: usize, gens: Vec<Vec<[f64; 2]>>, status: RunStatus) -> RunRecord {
        RunRecord {
            header: RecordHeader {
                config: String::new(),
                algorithm: algorithm.into(),
                run,
                seed: 0,
                rng: String::new(),
                objectives: 2,
                status,
                abort_reason: None,
                evaluations: 0,
            },
            generations: gens
                .into_iter()
                .enumerate()
                .map(|(generation, pts)| GenerationRecord {
                    generation,
                    individuals: pts
                        .into_iter()
                        .map(|p| IndividualRecord {
                            genome: vec![],
                            mean_return: p.to_vec(),
                            scalar: (p[0] + p[1]) / 2.0,
                        })
                        .collect(),
                })
                .collect(),
            wall_time: 0.0,
        }
    }

    #[test]
    fn single_point_reference_is_degenerate_but_igd_reaches_zero() {
        let r = record("GA", 0, vec![vec![[0.2, 0.1], [0.1, 0.0]], vec![[0.3, 0.4]]], RunStatus::Completed);
        let m = compute_metrics(&[r]).unwrap();
        assert_eq!(m.reference.points(), &[vec![0.3, 0.4]]);
        assert_eq!(m.rows.len(), 2);
        assert!(m.rows.iter().all(|row| row.hv.is_nan()));
        assert_eq!(m.rows[1].igd, 0.0);
        assert!(m.rows[0].igd > 0.0);
        assert_eq!(m.diagnostics.len(), 1);
    }

    #[test]
    fn per_algorithm_fronts_are_unions_of_final_populations() {
        let a0 = record("NSGA2", 0, vec![vec![[0.0, 1.0]], vec![[0.0, 1.0], [0.5, 0.4]]], RunStatus::Completed);
        let a1 = record("NSGA2", 1, vec![vec![[0.6, 0.1]], vec![[1.0, 0.0], [0.4, 0.4]]], RunStatus::Completed);
        let b0 = record("GA", 0, vec![vec![[0.9, 0.9]], vec![[0.5, 0.5]]], RunStatus::Completed);
        let m = compute_metrics(&[a0, a1, b0]).unwrap();
        assert_eq!(m.algorithm_fronts[0].0, "NSGA2");
        assert_eq!(
            m.algorithm_fronts[0].1.points(),
            &[vec![0.0, 1.0], vec![0.5, 0.4], vec![1.0, 0.0]]
        );
        assert_eq!(m.algorithm_fronts[1].1.points(), &[vec![0.5, 0.5]]);
        assert_eq!(m.reference.points(), &[vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]]);
        assert_eq!(m.rows.len(), 6);
        assert!(m.diagnostics.is_empty());
        // the union front scores exactly as the reference on its own rows
        let final_ga = m.rows.iter().find(|r| r.algorithm == "GA" && r.generation == 1).unwrap();
        assert_eq!(final_ga.gd, 0.0);
        assert_eq!(final_ga.scalarized_best, 0.5);
    }

    #[test]
    fn aborted_runs_are_scored_but_excluded_from_fronts() {
        let ok = record("GA", 0, vec![vec![[0.0, 1.0], [1.0, 0.0]]], RunStatus::Completed);
        let bad = record("GA", 1, vec![vec![[5.0, 5.0]]], RunStatus::Aborted);
        let m = compute_metrics(&[ok, bad]).unwrap();
        assert_eq!(m.reference.len(), 2);
        assert_eq!(m.rows.len(), 2);
        assert_eq!(m.rows[1].hv, 1.0);
    }

    #[test]
    fn no_completed_runs_is_an_error() {
        let bad = record("GA", 0, vec![vec![[0.0, 1.0]]], RunStatus::Aborted);
        assert!(compute_metrics(&[bad]).is_err());
    }
}
