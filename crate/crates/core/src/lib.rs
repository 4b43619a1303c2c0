//! Core algorithms for benchmarking evolutionary algorithms on continuous
//! multi-objective reinforcement-learning problems.
//!
//! Policies are fixed-topology feedforward networks encoded as flat real
//! genomes. A genome is scored by Monte Carlo rollouts in a small stochastic
//! multi-objective MDP, giving a vector of mean discounted returns that is
//! *maximized*. Eight optimizers share one generation interface: three
//! single-objective EAs working on the equal-weight scalarization (GA, DE,
//! PSO) and five MOEAs (NSGA-II, SPEA2, SMS-EMOA, NSGA-III, R-NSGA-II).
//! Fronts are scored with hypervolume, GD and IGD, and algorithms are compared
//! with the Friedman test and the Nemenyi post-hoc procedure.
//!
//! The crate is `no_std` and only needs `alloc`. Transcendental functions go
//! through `libm`, so a fixed seed reproduces the same bits on every target.
//!
//! Orientation conventions:
//! * rewards, returns and everything in [`pareto`] are maximized;
//! * the hypervolume routines in [`indicators`] take *minimization* points;
//!   [`pareto::normalize`] is the single place where maximized objectives are
//!   flipped into the minimization unit box.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algorithms;
pub mod env;
mod error;
pub mod eval;
pub mod indicators;
pub mod pareto;
pub mod policy;
pub mod rng;
pub mod stats;

pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
