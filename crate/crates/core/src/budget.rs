//! Splitting the global confidence budget over estimation tasks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::SupportMdp;

/// How the probabilities of one distribution are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskShape {
    /// Every successor probability is estimated.
    Direct,
    /// Two successors: one is estimated, the other is its complement.
    Complement,
}

/// The transitions of one transformed-model distribution that need estimating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimationTask {
    pub state: usize,
    pub action: usize,
    pub successors: Vec<usize>,
    pub shape: TaskShape,
}

impl EstimationTask {
    /// Number of transitions estimated directly.
    pub fn direct_transitions(&self) -> usize {
        match self.shape {
            TaskShape::Direct => self.successors.len(),
            TaskShape::Complement => 1,
        }
    }
}

/// Tasks of a transformed model; with `small_support`, deterministic distributions
/// need nothing and two-successor distributions need one estimate.
pub fn enumerate_tasks(g: &SupportMdp, small_support: bool) -> Vec<EstimationTask> {
    let mut tasks = Vec::new();
    for s in 0..g.num_states() {
        for (a, act) in g.actions(s).iter().enumerate() {
            let k = act.successors.len();
            let shape = match (small_support, k) {
                (true, 1) => continue,
                (true, 2) => TaskShape::Complement,
                _ => TaskShape::Direct,
            };
            tasks.push(EstimationTask {
                state: s,
                action: a,
                successors: act.successors.clone(),
                shape,
            });
        }
    }
    tasks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationMode {
    Uniform,
    Independence,
}

impl fmt::Display for AllocationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AllocationMode::Uniform => "uniform",
            AllocationMode::Independence => "independence",
        })
    }
}

impl FromStr for AllocationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(AllocationMode::Uniform),
            "independence" => Ok(AllocationMode::Independence),
            other => Err(format!(
                "unknown budget mode `{other}` (expected uniform or independence)"
            )),
        }
    }
}

/// Budget of one distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanEntry {
    pub distribution: String,
    pub delta_d: f64,
    pub transitions: usize,
    pub delta_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetPlan {
    pub delta: f64,
    pub mode: AllocationMode,
    /// Aligned with the task list the plan was built from.
    pub entries: Vec<PlanEntry>,
}

impl BudgetPlan {
    pub fn delta_t(&self, task: usize) -> f64 {
        self.entries[task].delta_t
    }

    pub fn total_transitions(&self) -> usize {
        self.entries.iter().map(|e| e.transitions).sum()
    }
}

fn label(g: &SupportMdp, t: &EstimationTask) -> String {
    format!("{}/{}", g.name(t.state), g.actions(t.state)[t.action].label)
}

/// Union bound over all directly estimated transitions: `δ_t = δ / Σ k`.
pub fn uniform_allocation(g: &SupportMdp, tasks: &[EstimationTask], delta: f64) -> BudgetPlan {
    let total: usize = tasks.iter().map(EstimationTask::direct_transitions).sum();
    let delta_t = delta / total.max(1) as f64;
    BudgetPlan {
        delta,
        mode: AllocationMode::Uniform,
        entries: tasks
            .iter()
            .map(|t| {
                let k = t.direct_transitions();
                PlanEntry {
                    distribution: label(g, t),
                    delta_d: delta_t * k as f64,
                    transitions: k,
                    delta_t,
                }
            })
            .collect(),
    }
}

/// `1 − (1 − δ)^w`, evaluated without cancellation.
pub fn independence_share(delta: f64, weight: f64) -> f64 {
    -(weight * (-delta).ln_1p()).exp_m1()
}

/// Multiplicative split over independent distributions, union bound within each.
///
/// Distribution `d` with `k_d` direct transitions out of `K` receives
/// `δ_d = 1 − (1 − δ)^{k_d / K}`, so that `∏ (1 − δ_d) = 1 − δ` and every
/// transition budget `δ_d / k_d` is at least the union-bound share `δ / K`.
/// When all distributions have equally many transitions this is the equal split
/// `δ_d = 1 − (1 − δ)^{1/|D|}`.
pub fn independence_allocation(g: &SupportMdp, tasks: &[EstimationTask], delta: f64) -> BudgetPlan {
    let total: usize = tasks.iter().map(EstimationTask::direct_transitions).sum();
    BudgetPlan {
        delta,
        mode: AllocationMode::Independence,
        entries: tasks
            .iter()
            .map(|t| {
                let k = t.direct_transitions();
                let delta_d = independence_share(delta, k as f64 / total as f64);
                PlanEntry {
                    distribution: label(g, t),
                    delta_d,
                    transitions: k,
                    delta_t: delta_d / k as f64,
                }
            })
            .collect(),
    }
}

pub fn allocate(
    mode: AllocationMode,
    g: &SupportMdp,
    tasks: &[EstimationTask],
    delta: f64,
) -> BudgetPlan {
    match mode {
        AllocationMode::Uniform => uniform_allocation(g, tasks, delta),
        AllocationMode::Independence => independence_allocation(g, tasks, delta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// One state per distribution, each with the given number of successors (all terminal).
    fn model(sizes: &[usize]) -> SupportMdp {
        let d = sizes.len();
        let width = sizes.iter().copied().max().unwrap_or(1);
        let mut actions: Vec<Vec<Vec<usize>>> =
            sizes.iter().map(|&k| vec![(d..d + k).collect()]).collect();
        actions.extend((0..width).map(|_| Vec::new()));
        SupportMdp::from_edges(0, &[d], actions)
    }

    #[test]
    fn small_support_rules() {
        let g = model(&[1, 2, 3]);
        let t = enumerate_tasks(&g, true);
        assert_eq!(t.len(), 2);
        assert_eq!(
            (t[0].shape, t[0].direct_transitions()),
            (TaskShape::Complement, 1)
        );
        assert_eq!(
            (t[1].shape, t[1].direct_transitions()),
            (TaskShape::Direct, 3)
        );
        let t = enumerate_tasks(&g, false);
        assert_eq!(t.iter().map(|t| t.direct_transitions()).sum::<usize>(), 6);
    }

    #[test]
    fn uniform_shares() {
        let g = model(&[2; 242]);
        let tasks = enumerate_tasks(&g, false);
        let plan = uniform_allocation(&g, &tasks, 0.1);
        assert_eq!(plan.total_transitions(), 484);
        assert!((plan.delta_t(0) - 0.1 / 484.0).abs() < 1e-18);
        assert!((plan.delta_t(0) - 2.066e-4).abs() < 1e-7);
        let g = model(&[2]);
        let plan = uniform_allocation(&g, &enumerate_tasks(&g, true), 0.1);
        assert_eq!(plan.delta_t(0), 0.1);
    }

    #[test]
    fn independence_two_distributions() {
        let g = model(&[2, 2]);
        let plan = independence_allocation(&g, &enumerate_tasks(&g, true), 0.1);
        let d = plan.entries[0].delta_d;
        assert!((d - 0.051_316_701_949_486_2).abs() < 1e-15);
        assert!(d > 0.05);
        assert!(((1.0 - d) * (1.0 - d) - 0.9).abs() < 1e-15);
        let g = model(&[3]);
        let plan = independence_allocation(&g, &enumerate_tasks(&g, true), 0.1);
        assert!((plan.entries[0].delta_d - 0.1).abs() < 1e-16);
    }

    #[test]
    fn equal_split_beats_union_bound() {
        for d in 1..=200 {
            for &delta in &[0.5, 0.1, 1e-3, 1e-8] {
                let share = independence_share(delta, 1.0 / d as f64);
                assert!(share >= delta / d as f64 * (1.0 - 1e-15));
            }
        }
    }

    #[test]
    fn plan_serializes_with_audit_fields() {
        let g = model(&[2]);
        let plan = uniform_allocation(&g, &enumerate_tasks(&g, true), 0.1);
        let json = serde_json::to_value(&plan).unwrap();
        let e = &json["entries"][0];
        for key in ["distribution", "delta_d", "transitions", "delta_t"] {
            assert!(e.get(key).is_some(), "{key}");
        }
        assert_eq!(e["distribution"], "s0/a0");
    }

    proptest! {
        #[test]
        fn plan_invariants(sizes in proptest::collection::vec(1usize..6, 1..30), delta in 1e-6f64..0.9, ss: bool) {
            let g = model(&sizes);
            let tasks = enumerate_tasks(&g, ss);
            prop_assume!(!tasks.is_empty());
            let u = uniform_allocation(&g, &tasks, delta);
            let sum: f64 = u.entries.iter().map(|e| e.delta_t * e.transitions as f64).sum();
            prop_assert!((sum - delta).abs() < 1e-15 * tasks.len() as f64 + 1e-15);
            let i = independence_allocation(&g, &tasks, delta);
            let prod: f64 = i.entries.iter().map(|e| (-e.delta_d).ln_1p()).sum::<f64>().exp();
            prop_assert!((prod - (1.0 - delta)).abs() < 1e-12);
            for (a, b) in i.entries.iter().zip(&u.entries) {
                prop_assert!(a.delta_t >= b.delta_t * (1.0 - 1e-12));
                prop_assert!(a.delta_t * a.transitions as f64 <= a.delta_d * (1.0 + 1e-15));
            }
        }
    }
}
