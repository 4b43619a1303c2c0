//! SPEA2: strength-based fitness with k-th nearest neighbour density and an
//! archive truncated by iterative nearest-neighbour removal.

use alloc::vec;
use alloc::vec::Vec;

use super::nsga2::select;
use super::operators::{binary_tournament, make_offspring};
use super::{objectives_of, Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::pareto::dominates_unchecked;
use crate::rng::RandomSource;
use crate::Result;

pub struct Spea2 {
    params: OperatorParams,
    archive: Vec<Individual>,
    fitness: Vec<f64>,
    archive_size: usize,
}

impl Spea2 {
    pub fn new(params: OperatorParams, population: Vec<Individual>) -> Self {
        let archive_size = population.len();
        let mut s = Spea2 {
            params,
            archive: Vec::new(),
            fitness: Vec::new(),
            archive_size,
        };
        s.environmental_selection(population);
        s
    }

    fn environmental_selection(&mut self, pool: Vec<Individual>) {
        let points = objectives_of(&pool);
        let kappa = neighbour_index(self.archive_size, points.len());
        let fitness = spea2_fitness(&points, kappa);
        let keep = spea2_select(&points, &fitness, self.archive_size);
        self.fitness = keep.iter().map(|&i| fitness[i]).collect();
        self.archive = select(pool, &keep);
    }
}

fn neighbour_index(pop_size: usize, pool: usize) -> usize {
    let k = libm::floor(libm::sqrt(2.0 * pop_size as f64)) as usize;
    k.clamp(1, pool.saturating_sub(1).max(1))
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// `S(i)`: how many points `i` dominates.
pub fn strengths(points: &[&[f64]]) -> Vec<usize> {
    points
        .iter()
        .map(|p| points.iter().filter(|q| dominates_unchecked(p, q)).count())
        .collect()
}

/// SPEA2 fitness `R(i) + D(i)` (lower is better), where `R(i)` sums the
/// strengths of the points dominating `i` and `D(i) = 1 / (sigma_k + 2)`
/// with `sigma_k` the distance to the `kappa`-th nearest other point.
pub fn spea2_fitness(points: &[&[f64]], kappa: usize) -> Vec<f64> {
    let s = strengths(points);
    (0..points.len())
        .map(|i| {
            let raw: usize = (0..points.len())
                .filter(|&j| dominates_unchecked(points[j], points[i]))
                .map(|j| s[j])
                .sum();
            let mut d: Vec<f64> = (0..points.len())
                .filter(|&j| j != i)
                .map(|j| distance(points[i], points[j]))
                .collect();
            d.sort_by(f64::total_cmp);
            let sigma = if d.is_empty() { 0.0 } else { d[(kappa - 1).min(d.len() - 1)] };
            raw as f64 + 1.0 / (sigma + 2.0)
        })
        .collect()
}

/// Environmental selection of `n` indices. Nondominated points (fitness
/// below 1) are kept; too many are truncated, too few are topped up with the
/// best dominated points by fitness.
pub fn spea2_select(points: &[&[f64]], fitness: &[f64], n: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = (0..points.len()).filter(|&i| fitness[i] < 1.0).collect();
    if chosen.len() < n {
        let mut rest: Vec<usize> = (0..points.len()).filter(|&i| fitness[i] >= 1.0).collect();
        rest.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
        chosen.extend_from_slice(&rest[..n - chosen.len()]);
    } else if chosen.len() > n {
        truncate(points, &mut chosen, n);
    }
    chosen
}

/// Repeatedly drops the member whose sorted distance list to the remaining
/// members is lexicographically smallest.
fn truncate(points: &[&[f64]], chosen: &mut Vec<usize>, n: usize) {
    let m = chosen.len();
    let dist: Vec<Vec<f64>> = chosen
        .iter()
        .map(|&a| chosen.iter().map(|&b| distance(points[a], points[b])).collect())
        .collect();
    let mut alive = vec![true; m];
    let mut remaining = m;
    while remaining > n {
        let profile = |i: usize| {
            let mut d: Vec<f64> = (0..m).filter(|&j| j != i && alive[j]).map(|j| dist[i][j]).collect();
            d.sort_by(f64::total_cmp);
            d
        };
        let mut victim = usize::MAX;
        let mut victim_profile = Vec::new();
        for i in (0..m).filter(|&i| alive[i]) {
            let p = profile(i);
            let smaller = victim == usize::MAX
                || p.iter().zip(&victim_profile).find(|(a, b)| a != b).is_some_and(|(a, b)| a < b);
            if smaller {
                victim = i;
                victim_profile = p;
            }
        }
        alive[victim] = false;
        remaining -= 1;
    }
    let kept: Vec<usize> = (0..m).filter(|&i| alive[i]).map(|i| chosen[i]).collect();
    *chosen = kept;
}

impl Algorithm for Spea2 {
    fn population(&self) -> &[Individual] {
        &self.archive
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let fitness = &self.fitness;
        let parents: Vec<_> = self.archive.iter().map(|i| &i.genome).collect();
        let children = make_offspring(self.archive_size, &self.params, &parents, rng, |rng| {
            binary_tournament(parents.len(), rng, |a, b| fitness[a] < fitness[b])
        });
        let offspring = evals.evaluate(&children)?;
        let mut pool = core::mem::take(&mut self.archive);
        pool.extend(offspring);
        self.environmental_selection(pool);
        Ok(())
    }
}
