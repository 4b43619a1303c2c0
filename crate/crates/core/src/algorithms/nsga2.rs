//! NSGA-II: binary tournament on (rank, crowding), SBX and polynomial
//! mutation, elitist (mu + lambda) survival by front then crowding.

use alloc::vec::Vec;

use super::operators::{binary_tournament, make_offspring};
use super::{objectives_of, Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::pareto::{crowding_distance, sort_fronts};
use crate::rng::RandomSource;
use crate::Result;

pub struct Nsga2 {
    params: OperatorParams,
    population: Vec<Individual>,
}

impl Nsga2 {
    pub fn new(params: OperatorParams, population: Vec<Individual>) -> Self {
        Nsga2 { params, population }
    }
}

/// Rank and crowding of every point (crowding within its own front).
pub(crate) fn rank_and_crowding(points: &[&[f64]]) -> (Vec<usize>, Vec<f64>, Vec<Vec<usize>>) {
    let fronts = sort_fronts(points);
    let mut rank = alloc::vec![0; points.len()];
    let mut crowding = alloc::vec![0.0; points.len()];
    for (r, front) in fronts.iter().enumerate() {
        let members: Vec<&[f64]> = front.iter().map(|&i| points[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&members)) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    (rank, crowding, fronts)
}

/// Indices of the `n` survivors of `points`: whole fronts while they fit,
/// then the last front by descending crowding distance (stable).
pub fn nsga2_survivors(points: &[&[f64]], n: usize) -> Vec<usize> {
    let (_, crowding, fronts) = rank_and_crowding(points);
    let mut chosen = Vec::with_capacity(n);
    for front in fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend_from_slice(&front);
            if chosen.len() == n {
                break;
            }
        } else {
            let mut last = front;
            last.sort_by(|&a, &b| crowding[b].total_cmp(&crowding[a]));
            chosen.extend_from_slice(&last[..n - chosen.len()]);
            break;
        }
    }
    chosen
}

impl Algorithm for Nsga2 {
    fn population(&self) -> &[Individual] {
        &self.population
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let pop = &self.population;
        let (rank, crowding, _) = rank_and_crowding(&objectives_of(pop));
        let better = |a: usize, b: usize| rank[a] < rank[b] || (rank[a] == rank[b] && crowding[a] > crowding[b]);
        let parents: Vec<_> = pop.iter().map(|i| &i.genome).collect();
        let children = make_offspring(pop.len(), &self.params, &parents, rng, |rng| {
            binary_tournament(pop.len(), rng, better)
        });
        let offspring = evals.evaluate(&children)?;

        let mut pool = core::mem::take(&mut self.population);
        pool.extend(offspring);
        let keep = nsga2_survivors(&objectives_of(&pool), pool.len() / 2);
        self.population = select(pool, &keep);
        Ok(())
    }
}

/// Moves the individuals at `keep` (in that order) out of `pool`.
pub(crate) fn select(pool: Vec<Individual>, keep: &[usize]) -> Vec<Individual> {
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    keep.iter().filter_map(|&i| slots[i].take()).collect()
}
