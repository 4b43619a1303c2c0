//! Built-in stochastic multi-objective MDPs.
//!
//! | name               | k | obs          | actions | horizon |
//! |--------------------|---|--------------|---------|---------|
//! | `TradeoffBandit`   | 2 | `(1.0)`      | 1       | 1       |
//! | `NoisyPointWalker` | 2 | `(x, v)`     | 1       | 20      |
//! | `HopLander`        | 3 | `(h, w, v)`  | 2       | 20      |
//!
//! All use `gamma = 0.99`, run exactly `horizon` steps and clamp actions to
//! `[-1, 1]`. Transition noise is `sigma * N(0, 1)` with `sigma = 0.01` unless
//! overridden; one Gaussian is drawn per step even when `sigma = 0`, so the
//! stream position does not depend on the noise scale.

use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;

use crate::error::invalid;
use crate::pareto::FrontApproximation;
use crate::rng::RandomSource;
use crate::{Error, Result};

/// Largest state, action or objective dimension in the catalog.
pub const MAX_DIM: usize = 3;

pub const DEFAULT_GAMMA: f64 = 0.99;
pub const DEFAULT_SIGMA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvKind {
    /// One step; action `a` gives `u = (a + 1) / 2` and reward `(u, 1 - u)`.
    TradeoffBandit,
    /// Point mass with speed and energy objectives.
    NoisyPointWalker,
    /// Hopping body with speed, height and energy objectives.
    HopLander,
}

impl EnvKind {
    pub const ALL: [EnvKind; 3] = [
        EnvKind::TradeoffBandit,
        EnvKind::NoisyPointWalker,
        EnvKind::HopLander,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvKind::TradeoffBandit => "TradeoffBandit",
            EnvKind::NoisyPointWalker => "NoisyPointWalker",
            EnvKind::HopLander => "HopLander",
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownEnvironment(s.to_string()))
    }
}

/// Static description of an environment instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSpec {
    pub kind: EnvKind,
    pub obs_dim: usize,
    pub action_dim: usize,
    pub objectives: usize,
    pub horizon: usize,
    pub gamma: f64,
    pub sigma: f64,
}

impl EnvSpec {
    pub fn new(kind: EnvKind) -> Self {
        let (obs_dim, action_dim, objectives, horizon) = match kind {
            EnvKind::TradeoffBandit => (1, 1, 2, 1),
            EnvKind::NoisyPointWalker => (2, 1, 2, 20),
            EnvKind::HopLander => (3, 2, 3, 20),
        };
        EnvSpec {
            kind,
            obs_dim,
            action_dim,
            objectives,
            horizon,
            gamma: DEFAULT_GAMMA,
            sigma: DEFAULT_SIGMA,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(EnvSpec::new(name.parse()?))
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma", "must be finite and nonnegative"));
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(invalid("horizon", "must be at least 1"));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn reset(&self, rng: &mut dyn RandomSource) -> EnvState {
        let vars = match self.kind {
            EnvKind::TradeoffBandit => [1.0, 0.0, 0.0],
            EnvKind::NoisyPointWalker => [0.0, rng.uniform(-0.05, 0.05), 0.0],
            EnvKind::HopLander => [1.0 + rng.uniform(-0.05, 0.05), 0.0, 0.0],
        };
        EnvState {
            vars,
            dim: self.obs_dim,
            step_index: 0,
        }
    }

    /// Advances `state` by one step. Actions outside `[-1, 1]` are clamped.
    pub fn step(
        &self,
        state: &EnvState,
        action: &[f64],
        rng: &mut dyn RandomSource,
    ) -> Result<StepResult> {
        if state.step_index >= self.horizon {
            return Err(Error::EpisodeFinished);
        }
        if action.len() != self.action_dim {
            return Err(Error::DimensionMismatch {
                expected: self.action_dim,
                found: action.len(),
            });
        }
        let mut a = [0.0; MAX_DIM];
        for (dst, &src) in a.iter_mut().zip(action) {
            // NaN actions become 0 rather than poisoning the state.
            *dst = if src.is_nan() { 0.0 } else { src.clamp(-1.0, 1.0) };
        }

        let s = &state.vars;
        let mut reward = [0.0; MAX_DIM];
        let vars = match self.kind {
            EnvKind::TradeoffBandit => {
                let u = (a[0] + 1.0) / 2.0;
                reward[0] = u;
                reward[1] = 1.0 - u;
                *s
            }
            EnvKind::NoisyPointWalker => {
                let eps = self.sigma * rng.standard_normal();
                let (x, v) = (s[0], s[1]);
                let v_next = (v + 0.1 * a[0] - 0.05 * v + eps).clamp(-1.0, 1.0);
                let x_next = x + 0.1 * v_next;
                reward[0] = v_next;
                reward[1] = -a[0] * a[0];
                [x_next, v_next, 0.0]
            }
            EnvKind::HopLander => {
                let eps = self.sigma * rng.standard_normal();
                let (h, w, v) = (s[0], s[1], s[2]);
                let mut w_next = w + 0.1 * a[0] - 0.02;
                let h_next = (h + 0.1 * w_next).max(0.0);
                if h_next == 0.0 {
                    w_next = 0.0;
                }
                let v_next = 0.95 * v + 0.1 * a[1] + eps;
                reward[0] = v_next;
                reward[1] = h_next;
                reward[2] = -(a[0] * a[0] + a[1] * a[1]);
                [h_next, w_next, v_next]
            }
        };
        let step_index = state.step_index + 1;
        Ok(StepResult {
            next_state: EnvState {
                vars,
                dim: state.dim,
                step_index,
            },
            reward,
            objectives: self.objectives,
            done: step_index == self.horizon,
        })
    }
}

/// Simulation state; the observation is the full state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvState {
    vars: [f64; MAX_DIM],
    dim: usize,
    pub step_index: usize,
}

impl EnvState {
    /// Builds a state directly, e.g. to start from a chosen point in tests.
    pub fn from_observation(obs: &[f64]) -> Self {
        let mut vars = [0.0; MAX_DIM];
        vars[..obs.len()].copy_from_slice(obs);
        EnvState {
            vars,
            dim: obs.len(),
            step_index: 0,
        }
    }

    pub fn observation(&self) -> &[f64] {
        &self.vars[..self.dim]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub next_state: EnvState,
    reward: [f64; MAX_DIM],
    objectives: usize,
    pub done: bool,
}

impl StepResult {
    pub fn reward(&self) -> &[f64] {
        &self.reward[..self.objectives]
    }
}

/// Exact Pareto front of `TradeoffBandit`: `(u, 1 - u)` on an even grid of
/// `resolution` values of `u` from 0 to 1.
pub fn analytic_front(resolution: usize) -> Result<FrontApproximation> {
    if resolution < 2 {
        return Err(invalid("resolution", "must be at least 2"));
    }
    let points: alloc::vec::Vec<_> = (0..resolution)
        .map(|i| {
            let u = i as f64 / (resolution - 1) as f64;
            [u, 1.0 - u]
        })
        .collect();
    crate::pareto::nondominated_filter(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    #[test]
    fn names_round_trip() {
        for k in EnvKind::ALL {
            assert_eq!(k.name().parse::<EnvKind>().unwrap(), k);
        }
        assert!(matches!(
            "mo-hopper-v4".parse::<EnvKind>(),
            Err(Error::UnknownEnvironment(_))
        ));
    }

    #[test]
    fn bandit_reset_and_step() {
        let env = EnvSpec::new(EnvKind::TradeoffBandit);
        let s = env.reset(&mut Stream::new(5));
        assert_eq!(s.observation(), &[1.0]);
        assert_eq!(s.step_index, 0);
        let r = env.step(&s, &[0.0], &mut Stream::new(5)).unwrap();
        assert_eq!(r.reward(), &[0.5, 0.5]);
        assert!(r.done);
        assert_eq!(
            env.step(&r.next_state, &[0.0], &mut Stream::new(5)),
            Err(Error::EpisodeFinished)
        );
    }

    const WALKER_V0_SEED42: u64 = 4580900022201335536;

    #[test]
    fn walker_reset_golden() {
        let env = EnvSpec::new(EnvKind::NoisyPointWalker);
        let mut rng = Stream::new(42);
        let s = env.reset(&mut rng);
        // Same draw reproduced through the documented uniform conversion.
        let mut replay = Stream::new(42);
        let v = -0.05 + 0.1 * replay.next_f64();
        assert_eq!(s.observation(), &[0.0, v]);
        assert_eq!(s.observation()[1].to_bits(), WALKER_V0_SEED42);
    }

    #[test]
    fn hop_reset_golden() {
        let env = EnvSpec::new(EnvKind::HopLander);
        let s = env.reset(&mut Stream::new(42));
        let mut replay = Stream::new(42);
        let h = 1.0 + (-0.05 + 0.1 * replay.next_f64());
        assert_eq!(s.observation(), &[h, 0.0, 0.0]);
    }

    #[test]
    fn walker_deterministic_step() {
        let env = EnvSpec::new(EnvKind::NoisyPointWalker).with_sigma(0.0).unwrap();
        let s = EnvState::from_observation(&[0.0, 0.0]);
        let r = env.step(&s, &[1.0], &mut Stream::new(1)).unwrap();
        assert!((r.next_state.observation()[1] - 0.1).abs() < 1e-15);
        assert!((r.next_state.observation()[0] - 0.01).abs() < 1e-15);
        assert!((r.reward()[0] - 0.1).abs() < 1e-15);
        assert_eq!(r.reward()[1], -1.0);
        assert!(!r.done);
    }

    #[test]
    fn hop_deterministic_step() {
        let env = EnvSpec::new(EnvKind::HopLander).with_sigma(0.0).unwrap();
        let s = EnvState::from_observation(&[1.0, 0.0, 0.0]);
        let r = env.step(&s, &[1.0, 1.0], &mut Stream::new(1)).unwrap();
        let o = r.next_state.observation();
        assert!((o[1] - 0.08).abs() < 1e-15);
        assert!((o[0] - 1.008).abs() < 1e-15);
        assert!((o[2] - 0.1).abs() < 1e-15);
        let rw = r.reward();
        assert!((rw[0] - 0.1).abs() < 1e-15 && (rw[1] - 1.008).abs() < 1e-15);
        assert_eq!(rw[2], -2.0);
    }

    #[test]
    fn hop_ground_contact_zeroes_vertical_speed() {
        let env = EnvSpec::new(EnvKind::HopLander).with_sigma(0.0).unwrap();
        let s = EnvState::from_observation(&[0.001, -0.5, 0.0]);
        let r = env.step(&s, &[-1.0, 0.0], &mut Stream::new(1)).unwrap();
        assert_eq!(r.next_state.observation()[0], 0.0);
        assert_eq!(r.next_state.observation()[1], 0.0);
    }

    #[test]
    fn actions_are_clamped() {
        let env = EnvSpec::new(EnvKind::TradeoffBandit);
        let s = env.reset(&mut Stream::new(0));
        let r = env.step(&s, &[7.0], &mut Stream::new(0)).unwrap();
        assert_eq!(r.reward(), &[1.0, 0.0]);
        assert!(env.step(&s, &[0.0, 0.0], &mut Stream::new(0)).is_err());
    }

    #[test]
    fn episodes_run_exactly_horizon_and_replay() {
        for kind in EnvKind::ALL {
            let env = EnvSpec::new(kind);
            let run = |seed| {
                let mut rng = Stream::new(seed);
                let mut s = env.reset(&mut rng);
                let mut rewards = alloc::vec::Vec::new();
                let mut steps = 0;
                loop {
                    let a = [0.3, -0.7][..env.action_dim].to_vec();
                    let r = env.step(&s, &a, &mut rng).unwrap();
                    assert!(r.reward().iter().all(|x| x.is_finite()));
                    rewards.push(r.reward().to_vec());
                    steps += 1;
                    s = r.next_state;
                    if r.done {
                        break;
                    }
                }
                assert_eq!(steps, env.horizon);
                rewards
            };
            assert_eq!(run(9), run(9));
        }
    }

    #[test]
    fn analytic_front_grid() {
        assert_eq!(analytic_front(2).unwrap().points(), &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(
            analytic_front(3).unwrap().points(),
            &[vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]
        );
        assert_eq!(analytic_front(101).unwrap().len(), 101);
        assert!(analytic_front(1).is_err());
    }

    use alloc::vec;
}
