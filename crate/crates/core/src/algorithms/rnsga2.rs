//! R-NSGA-II: NSGA-II with crowding replaced by a reference-point preference.
//!
//! The pool is normalized into the minimization unit box by its own ideal
//! and nadir. Inside each front, every solution is ranked by its Euclidean
//! distance to each reference point; its preference is the best of those
//! ranks. Epsilon clearing then keeps one representative of every group of
//! solutions within `epsilon` of each other and demotes the rest to `+inf`.

use alloc::vec;
use alloc::vec::Vec;

use super::nsga2::select;
use super::operators::{binary_tournament, make_offspring};
use super::{objectives_of, Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::pareto::{fold_columns, sort_fronts};
use crate::rng::RandomSource;
use crate::Result;

fn normalized_pool(points: &[&[f64]]) -> Vec<Vec<f64>> {
    let ideal = fold_columns(points, f64::max);
    let nadir = fold_columns(points, f64::min);
    points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(j, y)| {
                    let range = ideal[j] - nadir[j];
                    if range > 0.0 {
                        (ideal[j] - y) / range
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Preference value of each member of one front (lower is better).
/// `front` holds normalized points.
pub fn reference_point_distances(front: &[Vec<f64>], references: &[Vec<f64>], epsilon: f64) -> Vec<f64> {
    let n = front.len();
    let mut preference = vec![f64::INFINITY; n];
    for r in references {
        let mut order: Vec<usize> = (0..n).collect();
        let d: Vec<f64> = front.iter().map(|p| distance(p, r)).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        for (position, &i) in order.iter().enumerate() {
            preference[i] = preference[i].min((position + 1) as f64);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| preference[a].total_cmp(&preference[b]));
    let mut cleared = vec![false; n];
    for &i in &order {
        if cleared[i] {
            continue;
        }
        for &j in &order {
            if j != i && !cleared[j] && distance(&front[i], &front[j]) < epsilon {
                cleared[j] = true;
            }
        }
        // i stays as the group representative
        cleared[i] = false;
    }
    for i in 0..n {
        if cleared[i] {
            preference[i] = f64::INFINITY;
        }
    }
    preference
}

pub struct RNsga2 {
    params: OperatorParams,
    population: Vec<Individual>,
    references: Vec<Vec<f64>>,
}

impl RNsga2 {
    pub fn new(params: OperatorParams, population: Vec<Individual>, objectives: usize) -> Self {
        let references = params.rnsga2_reference_points.clone().unwrap_or_else(|| {
            (0..objectives)
                .map(|j| (0..objectives).map(|i| if i == j { 0.0 } else { 1.0 }).collect())
                .collect()
        });
        RNsga2 {
            params,
            population,
            references,
        }
    }

    pub fn references(&self) -> &[Vec<f64>] {
        &self.references
    }

    /// Front rank and preference of every point.
    fn rank_and_preference(&self, points: &[&[f64]]) -> (Vec<usize>, Vec<f64>, Vec<Vec<usize>>) {
        let normalized = normalized_pool(points);
        let fronts = sort_fronts(points);
        let mut rank = vec![0; points.len()];
        let mut preference = vec![0.0; points.len()];
        for (r, front) in fronts.iter().enumerate() {
            let members: Vec<Vec<f64>> = front.iter().map(|&i| normalized[i].clone()).collect();
            let pref = reference_point_distances(&members, &self.references, self.params.rnsga2_epsilon);
            for (&i, p) in front.iter().zip(pref) {
                rank[i] = r;
                preference[i] = p;
            }
        }
        (rank, preference, fronts)
    }

    pub(crate) fn survivors(&self, points: &[&[f64]], n: usize) -> Vec<usize> {
        let (_, preference, fronts) = self.rank_and_preference(points);
        let mut chosen = Vec::with_capacity(n);
        for front in fronts {
            if chosen.len() + front.len() <= n {
                chosen.extend_from_slice(&front);
                if chosen.len() == n {
                    break;
                }
            } else {
                let mut last = front;
                last.sort_by(|&a, &b| preference[a].total_cmp(&preference[b]));
                chosen.extend_from_slice(&last[..n - chosen.len()]);
                break;
            }
        }
        chosen
    }
}

impl Algorithm for RNsga2 {
    fn population(&self) -> &[Individual] {
        &self.population
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let pop = &self.population;
        let (rank, preference, _) = self.rank_and_preference(&objectives_of(pop));
        let better = |a: usize, b: usize| rank[a] < rank[b] || (rank[a] == rank[b] && preference[a] < preference[b]);
        let parents: Vec<_> = pop.iter().map(|i| &i.genome).collect();
        let children = make_offspring(pop.len(), &self.params, &parents, rng, |rng| {
            binary_tournament(pop.len(), rng, better)
        });
        let offspring = evals.evaluate(&children)?;
        let mut pool = core::mem::take(&mut self.population);
        pool.extend(offspring);
        let keep = self.survivors(&objectives_of(&pool), pool.len() / 2);
        self.population = select(pool, &keep);
        Ok(())
    }
}
