//! Monte Carlo estimation of a policy's vector value.
//!
//! One rollout gives one sample of the discounted return
//! `sum_{i=0}^{H-1} gamma^i r_{i+1}`. [`evaluate`] averages `n` rollouts,
//! episode `e` running on the stream keyed by `(seed_base, e)`, summing in
//! episode order before dividing.

use alloc::vec;
use alloc::vec::Vec;

use crate::env::{EnvSpec, MAX_DIM};
use crate::policy::{Genome, Network, PolicySpec};
use crate::rng::{RandomSource, Stream};
use crate::{Error, Result};

/// Anything that maps observations to actions.
pub trait Policy {
    fn act(&mut self, observation: &[f64], action: &mut [f64]) -> Result<()>;
}

impl Policy for Network<'_> {
    fn act(&mut self, observation: &[f64], action: &mut [f64]) -> Result<()> {
        Network::act(self, observation, action)
    }
}

/// Ignores the observation and always returns the same action.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantAction(pub Vec<f64>);

impl Policy for ConstantAction {
    fn act(&mut self, _observation: &[f64], action: &mut [f64]) -> Result<()> {
        if action.len() != self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                found: action.len(),
            });
        }
        action.copy_from_slice(&self.0);
        Ok(())
    }
}

/// Simulates one full episode and returns the discounted vector return.
pub fn rollout(env: &EnvSpec, policy: &mut dyn Policy, rng: &mut dyn RandomSource) -> Result<Vec<f64>> {
    let mut state = env.reset(rng);
    let mut total = vec![0.0; env.objectives];
    let mut action = [0.0; MAX_DIM];
    let action = &mut action[..env.action_dim];
    let mut discount = 1.0;
    loop {
        policy.act(state.observation(), action)?;
        let step = env.step(&state, action, rng)?;
        for (t, r) in total.iter_mut().zip(step.reward()) {
            *t += discount * r;
        }
        discount *= env.gamma;
        state = step.next_state;
        if step.done {
            return Ok(total);
        }
    }
}

fn check_dims(env: &EnvSpec, spec: &PolicySpec) -> Result<()> {
    if spec.obs_dim != env.obs_dim {
        return Err(Error::DimensionMismatch {
            expected: env.obs_dim,
            found: spec.obs_dim,
        });
    }
    if spec.action_dim != env.action_dim {
        return Err(Error::DimensionMismatch {
            expected: env.action_dim,
            found: spec.action_dim,
        });
    }
    Ok(())
}

/// [`rollout`] for a genome-encoded network.
pub fn rollout_genome(
    env: &EnvSpec,
    spec: &PolicySpec,
    genome: &[f64],
    rng: &mut dyn RandomSource,
) -> Result<Vec<f64>> {
    check_dims(env, spec)?;
    let mut net = Network::new(spec, genome)?;
    rollout(env, &mut net, rng)
}

/// Equal-weight scalarization: the mean of the objective values.
pub fn scalarize(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// A genome together with its estimated objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    /// Mean discounted return per objective (maximized).
    pub objectives: Vec<f64>,
    pub n_episodes: usize,
    /// [`scalarize`] of `objectives`.
    pub scalar: f64,
}

impl Individual {
    pub fn new(genome: Genome, objectives: Vec<f64>, n_episodes: usize) -> Self {
        let scalar = scalarize(&objectives);
        Individual {
            genome,
            objectives,
            n_episodes,
            scalar,
        }
    }
}

/// Monte Carlo mean over `n_episodes` rollouts, accumulated incrementally so
/// equal returns give back exactly that return.
pub fn evaluate(
    env: &EnvSpec,
    spec: &PolicySpec,
    genome: &Genome,
    n_episodes: usize,
    seed_base: u64,
) -> Result<Individual> {
    if n_episodes == 0 {
        return Err(crate::error::invalid("n_episodes", "must be at least 1"));
    }
    check_dims(env, spec)?;
    let mut net = Network::new(spec, genome)?;
    let mut mean = vec![0.0; env.objectives];
    for e in 0..n_episodes {
        let mut rng = Stream::keyed(seed_base, &[e as u64]);
        let ret = rollout(env, &mut net, &mut rng)?;
        for (m, r) in mean.iter_mut().zip(&ret) {
            *m += (r - *m) / (e + 1) as f64;
        }
    }
    Ok(Individual::new(genome.clone(), mean, n_episodes))
}
