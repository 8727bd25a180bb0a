//! Seeded random models for property tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;

use crate::model::{Action, Mdp};
use crate::solver::{Interval, IntervalDistribution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomMdpConfig {
    pub states: usize,
    pub max_actions: usize,
    pub max_successors: usize,
    /// Probability that a state is a target (state 0 never is).
    pub target_density: f64,
    /// Probability that an action only leads to higher-numbered states, which
    /// produces chains and acyclic fragments instead of one large component.
    pub forward: f64,
}

impl Default for RandomMdpConfig {
    fn default() -> Self {
        RandomMdpConfig {
            states: 10,
            max_actions: 3,
            max_successors: 3,
            target_density: 0.15,
            forward: 0.0,
        }
    }
}

/// Random positive weights normalised to sum to one.
fn simplex_point<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// A random model with state 0 initial and at least one target.
///
/// Successor sets are drawn uniformly from all states or, with probability
/// `forward`, from the later states only; self-loops, end components, chains and
/// unreachable states all occur.
pub fn random_mdp<R: Rng>(cfg: RandomMdpConfig, rng: &mut R) -> Mdp {
    let n = cfg.states.max(2);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut targets: Vec<usize> = (1..n)
        .filter(|_| rng.random_bool(cfg.target_density))
        .collect();
    if targets.is_empty() {
        targets.push(rng.random_range(1..n));
    }
    let actions = (0..n)
        .map(|s| {
            let k = rng.random_range(1..=cfg.max_actions.max(1));
            (0..k)
                .map(|a| {
                    let (base, width) = if s + 1 < n && rng.random_bool(cfg.forward) {
                        (s + 1, n - s - 1)
                    } else {
                        (0, n)
                    };
                    let m = rng.random_range(1..=cfg.max_successors.clamp(1, width));
                    let mut succ: Vec<usize> = sample(rng, width, m)
                        .into_iter()
                        .map(|t| base + t)
                        .collect();
                    succ.sort_unstable();
                    let probs = simplex_point(m, rng);
                    Action {
                        name: format!("a{a}"),
                        successors: succ.into_iter().zip(probs).collect(),
                    }
                })
                .collect()
        })
        .collect();
    Mdp::new(names, 0, targets, actions).expect("generated model is valid")
}

/// A feasible interval distribution over successors `0..k` that contains a
/// random point of the simplex.
pub fn random_interval_distribution<R: Rng>(k: usize, rng: &mut R) -> IntervalDistribution {
    let p = simplex_point(k, rng);
    let successors = p
        .iter()
        .enumerate()
        .map(|(t, &x)| {
            let lo = x * rng.random_range(0.0..1.0);
            let hi = x + (1.0 - x) * rng.random_range(0.0..1.0);
            (t, Interval { lo, hi })
        })
        .collect();
    IntervalDistribution::new(successors).expect("intervals contain a distribution")
}

/// Wraps every probability of `m` in an interval of at most `width` that contains it.
pub fn truth_containing_intervals<R: Rng>(
    m: &Mdp,
    width: f64,
    rng: &mut R,
) -> Vec<Vec<IntervalDistribution>> {
    (0..m.num_states())
        .map(|s| {
            m.actions(s)
                .iter()
                .map(|a| {
                    let successors = a
                        .successors
                        .iter()
                        .map(|&(t, p)| {
                            let below = width * rng.random_range(0.0..1.0);
                            let lo = (p - below).max(0.0);
                            let hi = (lo + width).min(1.0).max(p);
                            (t, Interval { lo, hi })
                        })
                        .collect();
                    IntervalDistribution::new(successors).expect("intervals contain the truth")
                })
                .collect()
        })
        .collect()
}
