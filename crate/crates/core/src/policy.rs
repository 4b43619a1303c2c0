//! Fixed-topology feedforward policies encoded as flat genomes.
//!
//! The network maps an observation through three hidden layers to the action,
//! applying `tanh` after every layer (including the output, so actions land in
//! `(-1, 1)`). The genome stores, for each layer from input to output, the
//! weight matrix row-major as `out x in`, followed by the bias vector.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::error::invalid;
use crate::rng::RandomSource;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicySpec {
    pub obs_dim: usize,
    pub hidden: [usize; 3],
    pub action_dim: usize,
}

impl PolicySpec {
    pub fn new(obs_dim: usize, hidden: [usize; 3], action_dim: usize) -> Result<Self> {
        if obs_dim == 0 || action_dim == 0 || hidden.contains(&0) {
            return Err(invalid("policy widths", "every layer needs at least one unit"));
        }
        Ok(PolicySpec {
            obs_dim,
            hidden,
            action_dim,
        })
    }

    /// Layer widths from input to output.
    pub fn widths(&self) -> [usize; 5] {
        let [h1, h2, h3] = self.hidden;
        [self.obs_dim, h1, h2, h3, self.action_dim]
    }

    pub fn genome_length(&self) -> usize {
        self.widths().windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    /// Draws every parameter from `Uniform(-1, 1)`.
    pub fn init_genome(&self, rng: &mut dyn RandomSource) -> Genome {
        random_genome(self.genome_length(), -1.0, 1.0, rng)
    }

    /// Forward pass; allocates scratch space on every call.
    pub fn act(&self, genome: &[f64], observation: &[f64]) -> Result<Vec<f64>> {
        let mut net = Network::new(self, genome)?;
        let mut out = vec![0.0; self.action_dim];
        net.act(observation, &mut out)?;
        Ok(out)
    }
}

pub(crate) fn random_genome(n: usize, lo: f64, hi: f64, rng: &mut dyn RandomSource) -> Genome {
    Genome((0..n).map(|_| rng.uniform(lo, hi)).collect())
}

/// Flat parameter vector of a policy network.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Genome(Vec<f64>);

impl Genome {
    pub fn new(theta: Vec<f64>) -> Self {
        Genome(theta)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for Genome {
    fn from(v: Vec<f64>) -> Self {
        Genome(v)
    }
}

impl Deref for Genome {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Genome {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// A policy network bound to a genome, with reusable scratch buffers.
#[derive(Debug, Clone)]
pub struct Network<'a> {
    spec: PolicySpec,
    theta: &'a [f64],
    front: Vec<f64>,
    back: Vec<f64>,
}

impl<'a> Network<'a> {
    pub fn new(spec: &PolicySpec, theta: &'a [f64]) -> Result<Self> {
        if theta.len() != spec.genome_length() {
            return Err(Error::DimensionMismatch {
                expected: spec.genome_length(),
                found: theta.len(),
            });
        }
        let widest = spec.widths().into_iter().max().unwrap_or(0);
        Ok(Network {
            spec: *spec,
            theta,
            front: Vec::with_capacity(widest),
            back: Vec::with_capacity(widest),
        })
    }

    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn act(&mut self, observation: &[f64], action: &mut [f64]) -> Result<()> {
        if observation.len() != self.spec.obs_dim {
            return Err(Error::DimensionMismatch {
                expected: self.spec.obs_dim,
                found: observation.len(),
            });
        }
        if action.len() != self.spec.action_dim {
            return Err(Error::DimensionMismatch {
                expected: self.spec.action_dim,
                found: action.len(),
            });
        }
        self.front.clear();
        self.front.extend_from_slice(observation);
        let mut offset = 0;
        for w in self.spec.widths().windows(2) {
            let (n_in, n_out) = (w[0], w[1]);
            let weights = &self.theta[offset..offset + n_in * n_out];
            let bias = &self.theta[offset + n_in * n_out..offset + n_in * n_out + n_out];
            offset += n_in * n_out + n_out;
            self.back.clear();
            for (row, b) in weights.chunks_exact(n_in).zip(bias) {
                let z = row.iter().zip(&self.front).fold(*b, |acc, (w, x)| acc + w * x);
                self.back.push(libm::tanh(z));
            }
            core::mem::swap(&mut self.front, &mut self.back);
        }
        action.copy_from_slice(&self.front);
        Ok(())
    }
}
