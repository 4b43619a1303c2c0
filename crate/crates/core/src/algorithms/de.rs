//! Differential evolution, rand/1/bin, with greedy one-to-one selection on
//! the scalarized objective.

use alloc::vec::Vec;

use super::{Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::policy::Genome;
use crate::rng::RandomSource;
use crate::Result;

pub struct De {
    params: OperatorParams,
    population: Vec<Individual>,
}

impl De {
    pub fn new(params: OperatorParams, population: Vec<Individual>) -> Self {
        De { params, population }
    }

    /// Trial vector for target `i`. Draws `r1, r2, r3` (distinct, all `!= i`,
    /// by rejection), then `j_rand`, then one uniform per gene.
    pub fn trial(&self, i: usize, rng: &mut dyn RandomSource) -> Genome {
        let n = self.population.len();
        let mut pick = |taken: &[usize]| loop {
            let r = rng.below(n);
            if r != i && !taken.contains(&r) {
                return r;
            }
        };
        let r1 = pick(&[]);
        let r2 = pick(&[r1]);
        let r3 = pick(&[r1, r2]);
        let (x1, x2, x3) = (
            &self.population[r1].genome,
            &self.population[r2].genome,
            &self.population[r3].genome,
        );
        let target = &self.population[i].genome;
        let j_rand = rng.below(target.len());
        let mut trial = target.clone();
        for j in 0..target.len() {
            if rng.chance(self.params.de_cr) || j == j_rand {
                let mutant = x1[j] + self.params.de_f * (x2[j] - x3[j]);
                trial[j] = self.params.bounds.clamp(mutant);
            }
        }
        trial
    }
}

impl Algorithm for De {
    fn population(&self) -> &[Individual] {
        &self.population
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let trials: Vec<Genome> = (0..self.population.len()).map(|i| self.trial(i, rng)).collect();
        let scored = evals.evaluate(&trials)?;
        for (target, trial) in self.population.iter_mut().zip(scored) {
            if trial.scalar >= target.scalar {
                *target = trial;
            }
        }
        Ok(())
    }
}
