//! Shared fixtures for the benchmarks.

use smc_core::random::{random_mdp, truth_containing_intervals, RandomMdpConfig};
use smc_core::sampler::path_rng;
use smc_core::solver::{IntervalMdp, Terminal};
use smc_core::Mdp;

/// A seeded random model with `states` states and mostly forward transitions.
pub fn random_model(states: usize, seed: u64) -> Mdp {
    let cfg = RandomMdpConfig {
        states,
        forward: 0.7,
        target_density: 0.05,
        ..RandomMdpConfig::default()
    };
    random_mdp(cfg, &mut path_rng(seed, 0))
}

/// `m` with every probability widened to an interval of width `width`.
pub fn interval_model(m: &Mdp, width: f64, seed: u64) -> IntervalMdp {
    let terminal = (0..m.num_states())
        .map(|s| m.is_target(s).then_some(Terminal::GOAL))
        .collect();
    let actions = truth_containing_intervals(m, width, &mut path_rng(seed, 1))
        .into_iter()
        .enumerate()
        .map(|(s, a)| if m.is_target(s) { Vec::new() } else { a })
        .collect();
    IntervalMdp::new(m.initial(), terminal, actions).expect("wrapped model is valid")
}
