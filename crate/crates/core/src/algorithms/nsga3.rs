//! NSGA-III: reference-direction niching on top of nondominated sorting.
//!
//! Objectives are negated into minimization. The selected fronts are
//! translated by their ideal point and scaled by the intercepts of the
//! hyperplane through the achievement-scalarizing extreme points (falling back
//! to the per-axis maximum when that system is degenerate). Each point is
//! associated with the direction at the smallest perpendicular distance. The
//! last front is filled one point at a time into the least crowded niche;
//! ties between niches are broken with the generation's stream, and the
//! member closest to the chosen direction joins.

use alloc::vec;
use alloc::vec::Vec;

use super::nsga2::select;
use super::{objectives_of, Algorithm, Evaluations, OperatorParams};
use crate::error::invalid;
use crate::eval::Individual;
use crate::pareto::sort_fronts;
use crate::rng::RandomSource;
use crate::Result;

/// Das–Dennis simplex-lattice directions: all nonnegative `k`-vectors whose
/// components are multiples of `1/p` summing to 1.
pub fn das_dennis(k: usize, p: usize) -> Result<Vec<Vec<f64>>> {
    if k < 2 || p < 1 {
        return Err(invalid("reference directions", "need k >= 2 and p >= 1"));
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; k];
    fill(&mut out, &mut current, 0, p, p);
    Ok(out)
}

fn fill(out: &mut Vec<Vec<f64>>, current: &mut Vec<usize>, axis: usize, left: usize, p: usize) {
    if axis == current.len() - 1 {
        current[axis] = left;
        out.push(current.iter().map(|&c| c as f64 / p as f64).collect());
        return;
    }
    for c in (0..=left).rev() {
        current[axis] = c;
        fill(out, current, axis + 1, left - c, p);
    }
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Directions from the smallest `p` giving at least `pop_size` of them.
pub fn directions_for(k: usize, pop_size: usize) -> Result<Vec<Vec<f64>>> {
    let mut p = 1;
    while binomial(k + p - 1, p) < pop_size {
        p += 1;
    }
    das_dennis(k, p)
}

fn perpendicular_distance(point: &[f64], direction: &[f64]) -> f64 {
    let norm2: f64 = direction.iter().map(|w| w * w).sum();
    let t = point.iter().zip(direction).map(|(x, w)| x * w).sum::<f64>() / norm2;
    libm::sqrt(point.iter().zip(direction).map(|(x, w)| (x - t * w) * (x - t * w)).sum())
}

/// Nearest direction and its perpendicular distance for each normalized point.
pub fn associate(points: &[Vec<f64>], directions: &[Vec<f64>]) -> Vec<(usize, f64)> {
    points
        .iter()
        .map(|p| {
            directions
                .iter()
                .enumerate()
                .map(|(j, w)| (j, perpendicular_distance(p, w)))
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        })
        .collect()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Normalizes minimization points (ideal translation, intercept scaling).
fn normalize(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = points[0].len();
    let ideal: Vec<f64> = (0..k)
        .map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let translated: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(&ideal).map(|(x, z)| x - z).collect())
        .collect();
    let extremes: Vec<Vec<f64>> = (0..k)
        .map(|axis| {
            let asf = |p: &Vec<f64>| {
                p.iter()
                    .enumerate()
                    .map(|(j, x)| x / if j == axis { 1.0 } else { 1e-6 })
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            translated
                .iter()
                .min_by(|a, b| asf(a).total_cmp(&asf(b)))
                .cloned()
                .unwrap_or_else(|| vec![0.0; k])
        })
        .collect();
    let axis_max: Vec<f64> = (0..k)
        .map(|j| translated.iter().map(|p| p[j]).fold(0.0, f64::max))
        .collect();
    let intercepts = solve(extremes, vec![1.0; k])
        .map(|b| b.iter().map(|x| 1.0 / x).collect::<Vec<f64>>())
        .filter(|a| a.iter().all(|x| x.is_finite() && *x > 1e-10))
        .unwrap_or(axis_max);
    translated
        .into_iter()
        .map(|p| {
            p.iter()
                .zip(&intercepts)
                .map(|(x, a)| if *a > 1e-10 { x / a } else { *x })
                .collect()
        })
        .collect()
}

/// Chooses `n` survivors from maximized `points`.
pub(crate) fn nsga3_survivors(
    points: &[&[f64]],
    directions: &[Vec<f64>],
    n: usize,
    rng: &mut dyn RandomSource,
) -> Vec<usize> {
    let fronts = sort_fronts(points);
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut last: Vec<usize> = Vec::new();
    for front in fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend_from_slice(&front);
            if chosen.len() == n {
                return chosen;
            }
        } else {
            last = front;
            break;
        }
    }

    let considered: Vec<usize> = chosen.iter().chain(&last).copied().collect();
    let negated: Vec<Vec<f64>> = considered.iter().map(|&i| points[i].iter().map(|x| -x).collect()).collect();
    let assoc = associate(&normalize(&negated), directions);
    let mut niche_count = vec![0usize; directions.len()];
    for (d, _) in &assoc[..chosen.len()] {
        niche_count[*d] += 1;
    }
    // candidates: (position in `considered`, taken?)
    let mut pending: Vec<usize> = (chosen.len()..considered.len()).collect();
    let mut open = vec![true; directions.len()];
    while chosen.len() < n {
        let min_count = (0..directions.len())
            .filter(|&j| open[j])
            .map(|j| niche_count[j])
            .min()
            .unwrap_or(0);
        let tied: Vec<usize> = (0..directions.len())
            .filter(|&j| open[j] && niche_count[j] == min_count)
            .collect();
        let j = tied[rng.below(tied.len())];
        let nearest = pending
            .iter()
            .enumerate()
            .filter(|(_, &c)| assoc[c].0 == j)
            .min_by(|a, b| assoc[*a.1].1.total_cmp(&assoc[*b.1].1))
            .map(|(pos, _)| pos);
        match nearest {
            Some(pos) => {
                let c = pending.remove(pos);
                chosen.push(considered[c]);
                niche_count[j] += 1;
            }
            None => open[j] = false,
        }
    }
    chosen
}

pub struct Nsga3 {
    params: OperatorParams,
    population: Vec<Individual>,
    directions: Vec<Vec<f64>>,
}

impl Nsga3 {
    pub fn new(params: OperatorParams, population: Vec<Individual>, objectives: usize) -> Result<Self> {
        let directions = directions_for(objectives, population.len())?;
        Ok(Nsga3 {
            params,
            population,
            directions,
        })
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }
}

impl Algorithm for Nsga3 {
    fn population(&self) -> &[Individual] {
        &self.population
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let n = self.population.len();
        let parents: Vec<_> = self.population.iter().map(|i| &i.genome).collect();
        let children = super::operators::make_offspring(n, &self.params, &parents, rng, |rng| rng.below(n));
        let offspring = evals.evaluate(&children)?;
        let mut pool = core::mem::take(&mut self.population);
        pool.extend(offspring);
        let keep = nsga3_survivors(&objectives_of(&pool), &self.directions, n, rng);
        self.population = select(pool, &keep);
        Ok(())
    }
}
