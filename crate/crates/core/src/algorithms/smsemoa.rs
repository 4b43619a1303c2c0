//! SMS-EMOA: steady-state (mu + 1) selection removing the point with the
//! smallest exclusive hypervolume contribution from the worst front.
//!
//! One generation is `pop_size` steady-state steps, so the evaluation budget
//! matches the generational algorithms. Hypervolume is taken on negated
//! objectives against the pool's worst value plus a 10% margin of the pool's
//! range, recomputed for every removal.

use alloc::vec::Vec;

use super::operators::{polynomial_mutation, sbx_crossover};
use super::{objectives_of, Algorithm, Evaluations, OperatorParams};
use crate::eval::Individual;
use crate::indicators::hypervolume_contributions;
use crate::pareto::sort_fronts;
use crate::rng::RandomSource;
use crate::Result;

pub struct SmsEmoa {
    params: OperatorParams,
    population: Vec<Individual>,
}

impl SmsEmoa {
    pub fn new(params: OperatorParams, population: Vec<Individual>) -> Self {
        SmsEmoa { params, population }
    }
}

/// Reference point for a pool of maximized points, in the negated space.
fn pool_reference(points: &[&[f64]]) -> Vec<f64> {
    let k = points[0].len();
    (0..k)
        .map(|j| {
            let worst = points.iter().map(|p| -p[j]).fold(f64::NEG_INFINITY, f64::max);
            let best = points.iter().map(|p| -p[j]).fold(f64::INFINITY, f64::min);
            let range = worst - best;
            worst + if range > 0.0 { 0.1 * range } else { 1.0 }
        })
        .collect()
}

/// Index of the point to discard from a pool of maximized objective vectors.
///
/// Uses `reference` (negated space) when given, otherwise the pool
/// reference described in the module docs. Ties go to the earliest index.
pub fn least_contributor(points: &[&[f64]], reference: Option<&[f64]>) -> Result<usize> {
    let fronts = sort_fronts(points);
    let worst = fronts.last().cloned().unwrap_or_default();
    if worst.len() == 1 {
        return Ok(worst[0]);
    }
    let owned_ref;
    let reference = match reference {
        Some(r) => r,
        None => {
            owned_ref = pool_reference(points);
            &owned_ref
        }
    };
    let negated: Vec<Vec<f64>> = worst.iter().map(|&i| points[i].iter().map(|x| -x).collect()).collect();
    let contributions = hypervolume_contributions(&negated, reference)?;
    let mut best = 0;
    for (i, c) in contributions.iter().enumerate() {
        if *c < contributions[best] {
            best = i;
        }
    }
    Ok(worst[best])
}

impl Algorithm for SmsEmoa {
    fn population(&self) -> &[Individual] {
        &self.population
    }

    fn step(&mut self, rng: &mut dyn RandomSource, evals: &mut Evaluations<'_>) -> Result<()> {
        let n = self.population.len();
        for _ in 0..n {
            let a = rng.below(n);
            let b = rng.below(n);
            let (mut child, _) = sbx_crossover(&self.population[a].genome, &self.population[b].genome, &self.params, rng);
            let p_m = self.params.mutation_prob(child.len());
            polynomial_mutation(&mut child, self.params.pm_eta, p_m, &self.params.bounds, rng);
            let scored = evals.evaluate(core::slice::from_ref(&child))?;
            self.population.extend(scored);
            let drop = least_contributor(&objectives_of(&self.population), None)?;
            self.population.remove(drop);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::hypervolume_exact;
    use crate::rng::Stream;

    #[test]
    fn duplicate_in_worst_front_goes_first() {
        let pts: [&[f64]; 4] = [&[0.0, 1.0], &[0.5, 0.5], &[0.5, 0.5], &[1.0, 0.0]];
        let i = least_contributor(&pts, None).unwrap();
        assert!(i == 1 || i == 2);
    }

    #[test]
    fn edge_point_has_least_contribution() {
        // maximization form of the minimization front {(0,.9),(.5,.5),(.9,0)}
        let pts: [&[f64]; 3] = [&[0.0, -0.9], &[-0.5, -0.5], &[-0.9, 0.0]];
        let i = least_contributor(&pts, Some(&[1.0, 1.0])).unwrap();
        assert_ne!(i, 1);
    }

    #[test]
    fn dominated_point_removed_first() {
        let pts: [&[f64]; 4] = [&[0.0, 1.0], &[1.0, 0.0], &[0.1, 0.1], &[0.6, 0.6]];
        assert_eq!(least_contributor(&pts, None).unwrap(), 2);
    }

    #[test]
    fn removal_never_lowers_population_hypervolume() {
        let mut rng = Stream::new(17);
        let reference = [1.5, 1.5];
        for _ in 0..200 {
            let pop: Vec<Vec<f64>> = (0..6).map(|_| alloc::vec![rng.next_f64(), rng.next_f64()]).collect();
            let child = alloc::vec![rng.next_f64(), rng.next_f64()];
            let hv = |pts: &[Vec<f64>]| {
                let neg: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
                hypervolume_exact(&neg, &[reference[0] - 1.5, reference[1] - 1.5].map(|x: f64| x + 0.5)).unwrap()
            };
            let before = hv(&pop);
            let mut pool = pop.clone();
            pool.push(child);
            let refs: Vec<&[f64]> = pool.iter().map(|p| p.as_slice()).collect();
            let drop = least_contributor(&refs, Some(&[0.5, 0.5])).unwrap();
            pool.remove(drop);
            assert!(hv(&pool) >= before - 1e-12);
        }
    }
}
