//! Run records: one JSON-lines file per (algorithm, run).
//!
//! The first line is a [`RecordHeader`]; each following line is one
//! [`GenerationRecord`]. Wall-clock time is kept off the file so that equal
//! inputs give byte-identical records.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use morl_core::eval::Individual;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, BenchError, Result};

pub const RNG_DESCRIPTION: &str = "ChaCha8 streams keyed by SplitMix64-derived seeds: run seed = derive(master_seed, [fnv1a(algorithm), run]); optimizer stream = keyed(run seed, [fnv1a(\"optimizer\"), generation]); evaluation seed = derive(run seed, [fnv1a(\"evaluation\"), generation, slot]), episode e on keyed(evaluation seed, [e])";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordHeader {
    /// Canonical text of the experiment config.
    pub config: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub rng: String,
    pub objectives: usize,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualRecord {
    pub genome: Vec<f64>,
    pub mean_return: Vec<f64>,
    pub scalar: f64,
}

impl From<&Individual> for IndividualRecord {
    fn from(ind: &Individual) -> Self {
        IndividualRecord {
            genome: ind.genome.to_vec(),
            mean_return: ind.objectives.clone(),
            scalar: ind.scalar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub individuals: Vec<IndividualRecord>,
}

impl GenerationRecord {
    pub fn objectives(&self) -> Vec<&[f64]> {
        self.individuals.iter().map(|i| i.mean_return.as_slice()).collect()
    }

    pub fn best_scalar(&self) -> f64 {
        self.individuals.iter().map(|i| i.scalar).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub header: RecordHeader,
    pub generations: Vec<GenerationRecord>,
    /// Seconds spent on the run; not persisted in the record file.
    pub wall_time: f64,
}

impl RunRecord {
    pub fn file_name(&self) -> String {
        format!("{}_run{}.jsonl", self.header.algorithm, self.header.run)
    }

    pub fn is_completed(&self) -> bool {
        self.header.status == RunStatus::Completed
    }

    pub fn final_generation(&self) -> Option<&GenerationRecord> {
        self.generations.last()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for g in &self.generations {
            out.push_str(&serde_json::to_string(g).expect("generation serializes"));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        let mut w = BufWriter::new(file);
        w.write_all(self.to_jsonl().as_bytes()).map_err(io_err(&path))?;
        w.flush().map_err(io_err(&path))?;
        Ok(path)
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(io_err(path))?;
        let bad = |line: usize, message: String| BenchError::Record {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = BufReader::new(file).lines();
        let first = lines
            .next()
            .ok_or_else(|| bad(1, "empty record".into()))?
            .map_err(io_err(path))?;
        let header: RecordHeader = serde_json::from_str(&first).map_err(|e| bad(1, e.to_string()))?;
        let mut generations = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io_err(path))?;
            if line.is_empty() {
                continue;
            }
            let g: GenerationRecord = serde_json::from_str(&line).map_err(|e| bad(i + 2, e.to_string()))?;
            if g.generation != generations.len() {
                return Err(bad(i + 2, format!("expected generation {}, found {}", generations.len(), g.generation)));
            }
            generations.push(g);
        }
        Ok(RunRecord {
            header,
            generations,
            wall_time: 0.0,
        })
    }
}

pub const RECORDS_DIR: &str = "records";

/// Reads every record under `dir/records`, ordered by the algorithm roster of
/// their config and then by run index.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let records_dir = dir.join(RECORDS_DIR);
    let mut records = Vec::new();
    for entry in fs::read_dir(&records_dir).map_err(io_err(&records_dir))? {
        let path = entry.map_err(io_err(&records_dir))?.path();
        if path.extension().is_some_and(|e| e == "jsonl") {
            records.push(RunRecord::read_from(&path)?);
        }
    }
    if records.is_empty() {
        return Err(BenchError::Invalid(format!("no run records in {}", records_dir.display())));
    }
    let config = crate::config::parse_config(&records[0].header.config)?;
    let order = |r: &RunRecord| {
        let a = config
            .algorithms
            .iter()
            .position(|k| k.name() == r.header.algorithm)
            .unwrap_or(usize::MAX);
        (a, r.header.algorithm.clone(), r.header.run)
    };
    records.sort_by_key(order);
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunRecord {
        RunRecord {
            header: RecordHeader {
                config: "environment = TradeoffBandit\nalgorithms = [GA]\n".into(),
                algorithm: "GA".into(),
                run: 3,
                seed: u64::MAX - 1,
                rng: RNG_DESCRIPTION.into(),
                objectives: 2,
                status: RunStatus::Completed,
                abort_reason: None,
                evaluations: 4,
            },
            generations: (0..2)
                .map(|g| GenerationRecord {
                    generation: g,
                    individuals: vec![
                        IndividualRecord {
                            genome: vec![0.1 + 0.2, -1.0 / 3.0],
                            mean_return: vec![0.7, 0.30000000000000004],
                            scalar: 0.5,
                        },
                        IndividualRecord {
                            genome: vec![1e-300, 5.0],
                            mean_return: vec![0.2, 0.8],
                            scalar: 0.5,
                        },
                    ],
                })
                .collect(),
            wall_time: 1.5,
        }
    }

    #[test]
    fn jsonl_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample();
        let path = r.write_to(dir.path()).unwrap();
        assert_eq!(path.file_name().unwrap(), "GA_run3.jsonl");
        let back = RunRecord::read_from(&path).unwrap();
        assert_eq!(back.header, r.header);
        assert_eq!(back.generations, r.generations);
        assert_eq!(back.to_jsonl(), r.to_jsonl());
        assert!(!r.to_jsonl().contains("wall"));
    }

    #[test]
    fn arbitrary_bits_survive_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = sample();
        let mut rng = morl_core::rng::Stream::new(9);
        let values: Vec<f64> = (0..2000)
            .map(|_| f64::from_bits(rng.next_u64() >> 2) * if rng.next_u64() % 2 == 0 { 1.0 } else { -1.0 })
            .filter(|x| x.is_finite())
            .collect();
        r.generations[0].individuals[0].genome = values.clone();
        let back = RunRecord::read_from(&r.write_to(dir.path()).unwrap()).unwrap();
        let bits = |xs: &[f64]| xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back.generations[0].individuals[0].genome), bits(&values));
    }

    #[test]
    fn one_line_per_generation_plus_header() {
        assert_eq!(sample().to_jsonl().lines().count(), 3);
    }

    #[test]
    fn out_of_order_generation_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = sample();
        r.generations[1].generation = 5;
        let path = r.write_to(dir.path()).unwrap();
        match RunRecord::read_from(&path) {
            Err(BenchError::Record { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
