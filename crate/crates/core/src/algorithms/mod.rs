//! The optimizer roster.
//!
//! Every optimizer works on real genomes and consumes exactly `pop_size`
//! evaluations per generation. Generation 0 is the evaluated random initial
//! population; each later call to [`Optimizer::step`] produces the next
//! generation. Single-objective EAs maximize [`Individual::scalar`]; MOEAs
//! maximize the objective vector.

mod de;
mod ga;
mod nsga2;
mod nsga3;
pub mod operators;
mod pso;
mod rnsga2;
mod smsemoa;
mod spea2;

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use de::De;
pub use ga::Ga;
pub use nsga2::{nsga2_survivors, Nsga2};
pub use nsga3::{associate, das_dennis, directions_for, Nsga3};
pub use pso::Pso;
pub use rnsga2::{reference_point_distances, RNsga2};
pub use smsemoa::{least_contributor, SmsEmoa};
pub use spea2::{spea2_fitness, spea2_select, strengths, Spea2};

use crate::error::invalid;
use crate::eval::Individual;
use crate::policy::{random_genome, Genome};
use crate::rng::RandomSource;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    Ga,
    De,
    Pso,
    Nsga2,
    Spea2,
    SmsEmoa,
    Nsga3,
    RNsga2,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 8] = [
        AlgorithmKind::Ga,
        AlgorithmKind::De,
        AlgorithmKind::Pso,
        AlgorithmKind::Nsga2,
        AlgorithmKind::Spea2,
        AlgorithmKind::SmsEmoa,
        AlgorithmKind::Nsga3,
        AlgorithmKind::RNsga2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Ga => "GA",
            AlgorithmKind::De => "DE",
            AlgorithmKind::Pso => "PSO",
            AlgorithmKind::Nsga2 => "NSGA2",
            AlgorithmKind::Spea2 => "SPEA2",
            AlgorithmKind::SmsEmoa => "SMSEMOA",
            AlgorithmKind::Nsga3 => "NSGA3",
            AlgorithmKind::RNsga2 => "RNSGA2",
        }
    }

    pub fn is_multi_objective(self) -> bool {
        !matches!(self, AlgorithmKind::Ga | AlgorithmKind::De | AlgorithmKind::Pso)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

/// Per-gene search interval shared by all genes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(invalid("bounds", "need finite lower < upper"));
        }
        Ok(Bounds { lower, upper })
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            lower: -5.0,
            upper: 5.0,
        }
    }
}

/// Operator parameters; defaults are the canonical settings.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorParams {
    pub bounds: Bounds,
    /// SBX distribution index.
    pub sbx_eta: f64,
    /// Probability that a parent pair is recombined at all.
    pub sbx_prob: f64,
    /// Per-gene probability of applying SBX within a recombined pair.
    pub sbx_gene_prob: f64,
    /// Polynomial mutation distribution index.
    pub pm_eta: f64,
    /// Per-gene mutation probability; `None` means `1 / n_genes`.
    pub pm_prob: Option<f64>,
    pub de_f: f64,
    pub de_cr: f64,
    pub pso_w: f64,
    pub pso_c1: f64,
    pub pso_c2: f64,
    pub rnsga2_epsilon: f64,
    /// R-NSGA-II reference points in the normalized minimization box
    /// (0 = best value in the pool, 1 = worst). `None` selects the `k`
    /// corners that are best in one objective and worst in the others.
    pub rnsga2_reference_points: Option<Vec<Vec<f64>>>,
}

impl Default for OperatorParams {
    fn default() -> Self {
        OperatorParams {
            bounds: Bounds::default(),
            sbx_eta: 15.0,
            sbx_prob: 0.9,
            sbx_gene_prob: 0.5,
            pm_eta: 20.0,
            pm_prob: None,
            de_f: 0.5,
            de_cr: 0.9,
            pso_w: 0.7298,
            pso_c1: 1.49618,
            pso_c2: 1.49618,
            rnsga2_epsilon: 0.01,
            rnsga2_reference_points: None,
        }
    }
}

impl OperatorParams {
    pub fn mutation_prob(&self, n_genes: usize) -> f64 {
        self.pm_prob.unwrap_or(1.0 / n_genes.max(1) as f64)
    }

    fn validate(&self) -> Result<()> {
        let prob = |name, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(invalid(name, "must lie in [0, 1]"))
            }
        };
        prob("sbx_prob", self.sbx_prob)?;
        prob("sbx_gene_prob", self.sbx_gene_prob)?;
        prob("de_cr", self.de_cr)?;
        if let Some(p) = self.pm_prob {
            prob("pm_prob", p)?;
        }
        if !(self.sbx_eta > 0.0) {
            return Err(invalid("sbx_eta", "must be positive"));
        }
        if !(self.pm_eta > 0.0) {
            return Err(invalid("pm_eta", "must be positive"));
        }
        if !(self.rnsga2_epsilon > 0.0) {
            return Err(invalid("rnsga2_epsilon", "must be positive"));
        }
        Bounds::new(self.bounds.lower, self.bounds.upper)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    pub pop_size: usize,
    pub params: OperatorParams,
}

impl AlgorithmConfig {
    pub fn new(kind: AlgorithmKind, pop_size: usize) -> Self {
        AlgorithmConfig {
            kind,
            pop_size,
            params: OperatorParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 || self.pop_size % 2 != 0 {
            return Err(invalid("pop_size", "must be even and at least 2"));
        }
        if self.kind == AlgorithmKind::De && self.pop_size < 4 {
            return Err(invalid("pop_size", "DE needs at least 4 individuals"));
        }
        self.params.validate()
    }
}

/// Scores genomes. Implementations may evaluate a batch concurrently but must
/// return results in input order.
pub trait Evaluator {
    /// `slot` is the position of `genomes[0]` among the evaluations of
    /// `generation`; slots are consecutive across the calls of a generation.
    fn evaluate(&mut self, generation: usize, slot: usize, genomes: &[Genome]) -> Result<Vec<Individual>>;
}

impl<F> Evaluator for F
where
    F: FnMut(usize, usize, &[Genome]) -> Result<Vec<Individual>>,
{
    fn evaluate(&mut self, generation: usize, slot: usize, genomes: &[Genome]) -> Result<Vec<Individual>> {
        self(generation, slot, genomes)
    }
}

/// Evaluator handle for one generation that hands out consecutive slots and
/// counts evaluations.
pub struct Evaluations<'a> {
    evaluator: &'a mut dyn Evaluator,
    generation: usize,
    used: usize,
}

impl<'a> Evaluations<'a> {
    pub fn new(evaluator: &'a mut dyn Evaluator, generation: usize) -> Self {
        Evaluations {
            evaluator,
            generation,
            used: 0,
        }
    }

    pub fn evaluate(&mut self, genomes: &[Genome]) -> Result<Vec<Individual>> {
        let out = self.evaluator.evaluate(self.generation, self.used, genomes)?;
        if out.len() != genomes.len() {
            return Err(Error::DimensionMismatch {
                expected: genomes.len(),
                found: out.len(),
            });
        }
        self.used += genomes.len();
        Ok(out)
    }

    pub fn used(&self) -> usize {
        self.used
    }
}

/// Behaviour shared by all optimizers.
pub trait Algorithm {
    /// The current solution set: the population, or for SPEA2 the archive and
    /// for PSO the personal bests.
    fn population(&self) -> &[Individual];

    /// Produces the next generation, consuming `pop_size` evaluations.
    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()>;
}

/// A configured optimizer with its generation counter and evaluation audit.
pub struct Optimizer {
    config: AlgorithmConfig,
    inner: alloc::boxed::Box<dyn Algorithm + Send>,
    generation: usize,
    evaluations: usize,
}

impl Optimizer {
    /// Samples and evaluates the initial population (generation 0). Genes are
    /// drawn from `Uniform(-1, 1)`.
    pub fn new(
        config: AlgorithmConfig,
        n_genes: usize,
        objectives: usize,
        rng: &mut dyn RandomSource,
        evaluator: &mut dyn Evaluator,
    ) -> Result<Self> {
        config.validate()?;
        if let Some(points) = &config.params.rnsga2_reference_points {
            if points.is_empty() || points.iter().any(|p| p.len() != objectives) {
                return Err(invalid(
                    "rnsga2_reference_points",
                    "need at least one point with one value per objective",
                ));
            }
        }
        let genomes: Vec<Genome> = (0..config.pop_size)
            .map(|_| random_genome(n_genes, -1.0, 1.0, rng))
            .collect();
        let mut evals = Evaluations::new(evaluator, 0);
        let initial = evals.evaluate(&genomes)?;
        let params = config.params.clone();
        let inner: alloc::boxed::Box<dyn Algorithm + Send> = match config.kind {
            AlgorithmKind::Ga => alloc::boxed::Box::new(Ga::new(params, initial)),
            AlgorithmKind::De => alloc::boxed::Box::new(De::new(params, initial)),
            AlgorithmKind::Pso => alloc::boxed::Box::new(Pso::new(params, initial)),
            AlgorithmKind::Nsga2 => alloc::boxed::Box::new(Nsga2::new(params, initial)),
            AlgorithmKind::Spea2 => alloc::boxed::Box::new(Spea2::new(params, initial)),
            AlgorithmKind::SmsEmoa => {
                if objectives > 3 {
                    return Err(Error::UnsupportedObjectiveCount(objectives));
                }
                alloc::boxed::Box::new(SmsEmoa::new(params, initial))
            }
            AlgorithmKind::Nsga3 => alloc::boxed::Box::new(Nsga3::new(params, initial, objectives)?),
            AlgorithmKind::RNsga2 => alloc::boxed::Box::new(RNsga2::new(params, initial, objectives)),
        };
        Ok(Optimizer {
            config,
            inner,
            generation: 0,
            evaluations: evals.used(),
        })
    }

    pub fn config(&self) -> &AlgorithmConfig {
        &self.config
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// Total evaluations consumed so far, including generation 0.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn population(&self) -> &[Individual] {
        self.inner.population()
    }

    pub fn step(&mut self, rng: &mut dyn RandomSource, evaluator: &mut dyn Evaluator) -> Result<()> {
        let generation = self.generation + 1;
        let mut evals = Evaluations::new(evaluator, generation);
        self.inner.step(rng, &mut evals)?;
        self.evaluations += evals.used();
        self.generation = generation;
        Ok(())
    }
}

/// Index of the individual with the largest scalar value (first on ties).
pub(crate) fn best_scalar(pop: &[Individual]) -> usize {
    let mut best = 0;
    for (i, ind) in pop.iter().enumerate() {
        if ind.scalar > pop[best].scalar {
            best = i;
        }
    }
    best
}

/// Objective vectors of a population.
pub(crate) fn objectives_of(pop: &[Individual]) -> Vec<&[f64]> {
    pop.iter().map(|i| i.objectives.as_slice()).collect()
}
