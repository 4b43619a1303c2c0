//! Generational GA on the scalarized objective.
//!
//! Binary tournament on the scalar value, SBX and polynomial mutation, full
//! replacement by the offspring. If no child beats the previous best, that
//! individual replaces the worst child (1-elitism).

use alloc::vec::Vec;

use super::operators::{binary_tournament, make_offspring};
use super::{best_scalar, Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::rng::RandomSource;
use crate::Result;

pub struct Ga {
    params: OperatorParams,
    population: Vec<Individual>,
}

impl Ga {
    pub fn new(params: OperatorParams, population: Vec<Individual>) -> Self {
        Ga { params, population }
    }
}

impl Algorithm for Ga {
    fn population(&self) -> &[Individual] {
        &self.population
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let pop = &self.population;
        let parents: Vec<_> = pop.iter().map(|i| &i.genome).collect();
        let children = make_offspring(pop.len(), &self.params, &parents, rng, |rng| {
            binary_tournament(pop.len(), rng, |a, b| pop[a].scalar > pop[b].scalar)
        });
        let mut offspring = evals.evaluate(&children)?;

        let elite = &pop[best_scalar(pop)];
        let best_child = best_scalar(&offspring);
        if offspring[best_child].scalar < elite.scalar {
            let worst = (0..offspring.len())
                .min_by(|&a, &b| offspring[a].scalar.total_cmp(&offspring[b].scalar))
                .unwrap_or(0);
            offspring[worst] = elite.clone();
        }
        self.population = offspring;
        Ok(())
    }
}
