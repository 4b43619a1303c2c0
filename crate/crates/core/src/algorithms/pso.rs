//! Global-best particle swarm on the scalarized objective.
//!
//! The reported population is the set of personal bests, so the best scalar
//! value never decreases.

use alloc::vec;
use alloc::vec::Vec;

use super::{best_scalar, Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::policy::Genome;
use crate::rng::RandomSource;
use crate::Result;

pub struct Pso {
    params: OperatorParams,
    positions: Vec<Genome>,
    velocities: Vec<Vec<f64>>,
    personal_best: Vec<Individual>,
    global_best: usize,
}

impl Pso {
    pub fn new(params: OperatorParams, population: Vec<Individual>) -> Self {
        let positions = population.iter().map(|i| i.genome.clone()).collect();
        let velocities = population.iter().map(|i| vec![0.0; i.genome.len()]).collect();
        let global_best = best_scalar(&population);
        Pso {
            params,
            positions,
            velocities,
            personal_best: population,
            global_best,
        }
    }

    pub fn velocities(&self) -> &[Vec<f64>] {
        &self.velocities
    }

    pub fn positions(&self) -> &[Genome] {
        &self.positions
    }

    /// Moves every particle; two uniforms per gene (`u1` then `u2`).
    fn fly(&mut self, rng: &mut dyn RandomSource) {
        let p = &self.params;
        let v_max = p.bounds.width() / 2.0;
        let gbest = &self.personal_best[self.global_best].genome;
        for ((x, v), pbest) in self
            .positions
            .iter_mut()
            .zip(&mut self.velocities)
            .zip(&self.personal_best)
        {
            for j in 0..x.len() {
                let u1 = rng.next_f64();
                let u2 = rng.next_f64();
                let vj = p.pso_w * v[j]
                    + p.pso_c1 * u1 * (pbest.genome[j] - x[j])
                    + p.pso_c2 * u2 * (gbest[j] - x[j]);
                v[j] = vj.clamp(-v_max, v_max);
                x[j] = p.bounds.clamp(x[j] + v[j]);
            }
        }
    }
}

impl Algorithm for Pso {
    fn population(&self) -> &[Individual] {
        &self.personal_best
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        self.fly(rng);
        let scored = evals.evaluate(&self.positions)?;
        for (best, current) in self.personal_best.iter_mut().zip(scored) {
            if current.scalar > best.scalar {
                *best = current;
            }
        }
        self.global_best = best_scalar(&self.personal_best);
        Ok(())
    }
}
