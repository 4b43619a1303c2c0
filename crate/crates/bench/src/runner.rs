//! Seeded execution of every (algorithm, run) pair of an experiment.

use std::time::Instant;

use log::{info, warn};
use morl_core::algorithms::{AlgorithmKind, Evaluator, Optimizer};
use morl_core::eval::{evaluate, Individual};
use morl_core::policy::Genome;
use morl_core::rng::{derive_seed, name_tag, Stream};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};
use crate::record::{GenerationRecord, RecordHeader, RunRecord, RunStatus, RNG_DESCRIPTION};

/// Scores one genome given its evaluation seed.
pub type ScoreFn<'a> = dyn Fn(&Genome, u64) -> morl_core::Result<Individual> + Sync + 'a;

pub fn run_seed(master_seed: u64, kind: AlgorithmKind, run: usize) -> u64 {
    derive_seed(master_seed, &[name_tag(kind.name()), run as u64])
}

fn optimizer_stream(run_seed: u64, generation: usize) -> Stream {
    Stream::keyed(run_seed, &[name_tag("optimizer"), generation as u64])
}

pub fn evaluation_seed(run_seed: u64, generation: usize, slot: usize) -> u64 {
    derive_seed(run_seed, &[name_tag("evaluation"), generation as u64, slot as u64])
}

/// Scores a batch in parallel on the current rayon pool, keeping input order,
/// and counts every evaluation it hands out.
struct BatchEvaluator<'a, 'b> {
    score: &'a ScoreFn<'b>,
    run_seed: u64,
    count: usize,
}

impl Evaluator for BatchEvaluator<'_, '_> {
    fn evaluate(&mut self, generation: usize, slot: usize, genomes: &[Genome]) -> morl_core::Result<Vec<Individual>> {
        let run_seed = self.run_seed;
        let scored: Vec<Individual> = genomes
            .par_iter()
            .enumerate()
            .map(|(i, g)| (self.score)(g, evaluation_seed(run_seed, generation, slot + i)))
            .collect::<morl_core::Result<_>>()?;
        self.count += genomes.len();
        if scored.iter().any(|ind| ind.objectives.iter().any(|x| !x.is_finite())) {
            return Err(morl_core::Error::NonFinite("mean return"));
        }
        Ok(scored)
    }
}

fn snapshot(generation: usize, population: &[Individual]) -> GenerationRecord {
    GenerationRecord {
        generation,
        individuals: population.iter().map(Into::into).collect(),
    }
}

/// Runs one (algorithm, run) pair. Evaluation failures abort the run and are
/// recorded in its header; the generations completed so far are kept.
pub fn run_single(config: &ExperimentConfig, kind: AlgorithmKind, run: usize, score: &ScoreFn<'_>) -> Result<RunRecord> {
    let start = Instant::now();
    let env = config.env_spec()?;
    let policy = config.policy_spec()?;
    let seed = run_seed(config.master_seed, kind, run);
    let mut evaluator = BatchEvaluator {
        score,
        run_seed: seed,
        count: 0,
    };
    let mut generations = Vec::with_capacity(config.generations);
    let mut failure = None;
    let mut rng = optimizer_stream(seed, 0);
    match Optimizer::new(
        config.algorithm_config(kind),
        policy.genome_length(),
        env.objectives,
        &mut rng,
        &mut evaluator,
    ) {
        Ok(mut opt) => {
            generations.push(snapshot(0, opt.population()));
            for g in 1..config.generations {
                let mut rng = optimizer_stream(seed, g);
                if let Err(e) = opt.step(&mut rng, &mut evaluator) {
                    failure = Some(e);
                    break;
                }
                generations.push(snapshot(g, opt.population()));
            }
            if failure.is_none() && opt.evaluations() != evaluator.count {
                return Err(BenchError::Invalid(format!(
                    "{kind} run {run}: optimizer counted {} evaluations, evaluator {}",
                    opt.evaluations(),
                    evaluator.count
                )));
            }
        }
        Err(e @ morl_core::Error::NonFinite(_)) => failure = Some(e),
        Err(e) => return Err(e.into()),
    }
    let status = if failure.is_some() { RunStatus::Aborted } else { RunStatus::Completed };
    match &failure {
        Some(e) => warn!("{kind} run {run} aborted after {} generations: {e}", generations.len()),
        None => info!("{kind} run {run} finished ({} evaluations)", evaluator.count),
    }
    Ok(RunRecord {
        header: RecordHeader {
            config: config.to_text(),
            algorithm: kind.name().to_string(),
            run,
            seed,
            rng: RNG_DESCRIPTION.to_string(),
            objectives: env.objectives,
            status,
            abort_reason: failure.map(|e| e.to_string()),
            evaluations: evaluator.count,
        },
        generations,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs the experiment with a custom scorer on a pool of `jobs` threads.
/// Records come back in roster order, then by run index.
pub fn run_experiment_with(config: &ExperimentConfig, jobs: usize, score: &ScoreFn<'_>) -> Result<Vec<RunRecord>> {
    config.env_spec()?;
    config.policy_spec()?;
    for &kind in &config.algorithms {
        config.algorithm_config(kind).validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| BenchError::Invalid(format!("thread pool: {e}")))?;
    let tasks: Vec<(AlgorithmKind, usize)> = config
        .algorithms
        .iter()
        .flat_map(|&k| (0..config.n_runs).map(move |r| (k, r)))
        .collect();
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(kind, run)| run_single(config, kind, run, score))
            .collect()
    })
}

/// Runs the experiment with Monte Carlo policy evaluation.
pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<Vec<RunRecord>> {
    let env = config.env_spec()?;
    let policy = config.policy_spec()?;
    let n_episodes = config.n_episodes;
    let score = move |g: &Genome, seed: u64| evaluate(&env, &policy, g, n_episodes, seed);
    run_experiment_with(config, jobs, &score)
}
