//! Variation and selection operators shared by the optimizers.

use alloc::vec::Vec;

use super::{Bounds, OperatorParams};
use crate::policy::Genome;
use crate::rng::RandomSource;

/// SBX spread factor for uniform draw `u`.
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        libm::pow(2.0 * u, exponent)
    } else {
        libm::pow(1.0 / (2.0 * (1.0 - u)), exponent)
    }
}

/// SBX on one gene pair: `((1+b) x1 + (1-b) x2) / 2` and
/// `((1-b) x1 + (1+b) x2) / 2`.
pub fn sbx_pair(x1: f64, x2: f64, u: f64, eta: f64) -> (f64, f64) {
    let beta = sbx_beta(u, eta);
    (
        0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2),
        0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2),
    )
}

/// Simulated binary crossover.
///
/// With probability `sbx_prob` the pair is recombined; then every gene is
/// crossed with probability `sbx_gene_prob` using one uniform draw for the
/// spread. Children are clamped to the bounds. Draw order: one draw for the
/// pair, then per gene one draw for the gene decision and, if crossed, one
/// for the spread. Genes equal in both parents are copied unchanged.
pub fn sbx_crossover(a: &Genome, b: &Genome, params: &OperatorParams, rng: &mut dyn RandomSource) -> (Genome, Genome) {
    debug_assert_eq!(a.len(), b.len());
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    if !rng.chance(params.sbx_prob) {
        return (c1, c2);
    }
    for j in 0..a.len() {
        if !rng.chance(params.sbx_gene_prob) {
            continue;
        }
        let u = rng.next_f64();
        if a[j] == b[j] {
            continue;
        }
        let (y1, y2) = sbx_pair(a[j], b[j], u, params.sbx_eta);
        c1[j] = params.bounds.clamp(y1);
        c2[j] = params.bounds.clamp(y2);
    }
    (c1, c2)
}

/// Bounded polynomial perturbation of one gene for draw `u`.
pub fn polynomial_gene(x: f64, u: f64, eta: f64, bounds: &Bounds) -> f64 {
    let (lo, hi) = (bounds.lower, bounds.upper);
    let width = hi - lo;
    let power = 1.0 / (eta + 1.0);
    let delta = if u < 0.5 {
        let d1 = (x - lo) / width;
        let val = 2.0 * u + (1.0 - 2.0 * u) * libm::pow(1.0 - d1, eta + 1.0);
        libm::pow(val, power) - 1.0
    } else {
        let d2 = (hi - x) / width;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * libm::pow(1.0 - d2, eta + 1.0);
        1.0 - libm::pow(val, power)
    };
    bounds.clamp(x + delta * width)
}

/// Polynomial mutation: each gene mutates with probability `p_m`. One draw
/// per gene for the decision plus one for the perturbation when mutated.
pub fn polynomial_mutation(g: &mut Genome, eta: f64, p_m: f64, bounds: &Bounds, rng: &mut dyn RandomSource) {
    for x in g.iter_mut() {
        if rng.chance(p_m) {
            let u = rng.next_f64();
            *x = polynomial_gene(*x, u, eta, bounds);
        }
    }
}

/// Binary tournament: draws two indices, keeps the one `better` prefers,
/// the first on ties.
pub fn binary_tournament(n: usize, rng: &mut dyn RandomSource, better: impl Fn(usize, usize) -> bool) -> usize {
    let a = rng.below(n);
    let b = rng.below(n);
    if better(b, a) {
        b
    } else {
        a
    }
}

/// SBX followed by polynomial mutation on parent pairs picked by `pick`,
/// until `count` children exist.
pub fn make_offspring(
    count: usize,
    params: &OperatorParams,
    parents: &[&Genome],
    rng: &mut dyn RandomSource,
    mut pick: impl FnMut(&mut dyn RandomSource) -> usize,
) -> Vec<Genome> {
    let n_genes = parents.first().map_or(0, |g| g.len());
    let p_m = params.mutation_prob(n_genes);
    let mut children = Vec::with_capacity(count + 1);
    while children.len() < count {
        let a = pick(rng);
        let b = pick(rng);
        let (mut c1, mut c2) = sbx_crossover(parents[a], parents[b], params, rng);
        polynomial_mutation(&mut c1, params.pm_eta, p_m, &params.bounds, rng);
        polynomial_mutation(&mut c2, params.pm_eta, p_m, &params.bounds, rng);
        children.push(c1);
        children.push(c2);
    }
    children.truncate(count);
    children
}
