//! Interval MDPs and interval iteration for maximal reachability.

use serde::Serialize;
use thiserror::Error;

use crate::graph::tarjan;

/// Slack allowed when checking that a distribution fits its intervals.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Default cap on Gauss-Seidel sweeps.
pub const MAX_SWEEPS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("interval [{lo}, {hi}] is not a sub-interval of [0,1]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("infeasible intervals: lower bounds sum to {lo_sum}, upper bounds to {hi_sum}")]
    Infeasible { lo_sum: f64, hi_sum: f64 },
    #[error("state {state} is neither terminal nor has actions")]
    NoActions { state: usize },
    #[error("successor {successor} of state {state} does not exist")]
    UnknownSuccessor { state: usize, successor: usize },
    #[error("interval iteration hit the cap of {sweeps} sweeps (gap {gap})")]
    IterationCap {
        sweeps: usize,
        gap: f64,
        partial: Box<ValueBounds>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, SolverError> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(SolverError::BadInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(p: f64) -> Self {
        Interval { lo: p, hi: p }
    }

    pub const TRIVIAL: Interval = Interval { lo: 0.0, hi: 1.0 };
}

/// Successor intervals of one action, sorted by successor id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalDistribution {
    pub successors: Vec<(usize, Interval)>,
}

impl IntervalDistribution {
    pub fn new(mut successors: Vec<(usize, Interval)>) -> Result<Self, SolverError> {
        successors.sort_by_key(|&(t, _)| t);
        let lo_sum: f64 = successors.iter().map(|(_, i)| i.lo).sum();
        let hi_sum: f64 = successors.iter().map(|(_, i)| i.hi).sum();
        if lo_sum > 1.0 + FEASIBILITY_TOLERANCE || hi_sum < 1.0 - FEASIBILITY_TOLERANCE {
            return Err(SolverError::Infeasible { lo_sum, hi_sum });
        }
        Ok(IntervalDistribution { successors })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Optimistic,
    Pessimistic,
}

/// Terminal value bounds; `(0, 1)` marks a state whose value is unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Terminal {
    pub lo: f64,
    pub hi: f64,
}

impl Terminal {
    pub const GOAL: Terminal = Terminal { lo: 1.0, hi: 1.0 };
    pub const SINK: Terminal = Terminal { lo: 0.0, hi: 0.0 };
    pub const UNKNOWN: Terminal = Terminal { lo: 0.0, hi: 1.0 };
}

/// An MDP whose transition probabilities are only known up to intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalMdp {
    initial: usize,
    terminal: Vec<Option<Terminal>>,
    actions: Vec<Vec<IntervalDistribution>>,
}

impl IntervalMdp {
    pub fn new(
        initial: usize,
        terminal: Vec<Option<Terminal>>,
        actions: Vec<Vec<IntervalDistribution>>,
    ) -> Result<Self, SolverError> {
        let n = terminal.len();
        assert_eq!(n, actions.len());
        assert!(initial < n);
        for s in 0..n {
            if terminal[s].is_none() && actions[s].is_empty() {
                return Err(SolverError::NoActions { state: s });
            }
            for d in &actions[s] {
                for &(t, _) in &d.successors {
                    if t >= n {
                        return Err(SolverError::UnknownSuccessor {
                            state: s,
                            successor: t,
                        });
                    }
                }
            }
        }
        Ok(IntervalMdp {
            initial,
            terminal,
            actions,
        })
    }

    pub fn num_states(&self) -> usize {
        self.terminal.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn terminal(&self, s: usize) -> Option<Terminal> {
        self.terminal[s]
    }

    pub fn actions(&self, s: usize) -> &[IntervalDistribution] {
        &self.actions[s]
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        self.actions
            .iter()
            .map(|acts| {
                let mut v: Vec<usize> = acts
                    .iter()
                    .flat_map(|d| {
                        d.successors
                            .iter()
                            .filter(|(_, i)| i.hi > 0.0)
                            .map(|&(t, _)| t)
                    })
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }
}

/// Extremal feasible distribution by greedy saturation.
///
/// Every successor starts at its lower bound; the remaining mass goes to successors
/// in order of decreasing (optimistic) or increasing (pessimistic) value, ties by id.
pub fn extremal_distribution(
    d: &IntervalDistribution,
    values: &[f64],
    direction: Direction,
) -> Vec<(usize, f64)> {
    let mut order: Vec<usize> = (0..d.successors.len()).collect();
    order.sort_by(|&i, &j| {
        let (vi, vj) = (values[d.successors[i].0], values[d.successors[j].0]);
        let by_value = match direction {
            Direction::Optimistic => vj.total_cmp(&vi),
            Direction::Pessimistic => vi.total_cmp(&vj),
        };
        by_value.then(d.successors[i].0.cmp(&d.successors[j].0))
    });
    let mut p: Vec<f64> = d.successors.iter().map(|(_, i)| i.lo).collect();
    let mut rest = 1.0 - p.iter().sum::<f64>();
    for i in order {
        if rest <= 0.0 {
            break;
        }
        let add = (d.successors[i].1.hi - d.successors[i].1.lo).min(rest);
        p[i] += add;
        rest -= add;
    }
    d.successors.iter().map(|&(t, _)| t).zip(p).collect()
}

fn inner(d: &IntervalDistribution, values: &[f64], direction: Direction) -> f64 {
    extremal_distribution(d, values, direction)
        .into_iter()
        .map(|(t, p)| p * values[t])
        .sum()
}

/// The extremal expected value of `values` over all distributions consistent with `d`.
pub fn robust_bellman(
    d: &IntervalDistribution,
    values: &[f64],
    direction: Direction,
) -> Result<f64, SolverError> {
    let lo_sum: f64 = d.successors.iter().map(|(_, i)| i.lo).sum();
    let hi_sum: f64 = d.successors.iter().map(|(_, i)| i.hi).sum();
    if lo_sum > 1.0 + FEASIBILITY_TOLERANCE || hi_sum < 1.0 - FEASIBILITY_TOLERANCE {
        return Err(SolverError::Infeasible { lo_sum, hi_sum });
    }
    Ok(inner(d, values, direction))
}

/// Sound two-sided bounds on the maximal reachability value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub iterations: usize,
    /// `hi − lo` at the initial state.
    pub gap: f64,
}

/// Whether `d` can keep all of its mass inside the set described by `inside`.
fn can_stay(d: &IntervalDistribution, inside: impl Fn(usize) -> bool) -> bool {
    let mut hi_in = 0.0;
    for &(t, i) in &d.successors {
        if inside(t) {
            hi_in += i.hi;
        } else if i.lo > 0.0 {
            return false;
        }
    }
    hi_in >= 1.0 - FEASIBILITY_TOLERANCE
}

/// Maximal sets in which some resolution of actions and intervals stays forever.
fn possible_end_components(imdp: &IntervalMdp) -> Vec<Vec<usize>> {
    let n = imdp.num_states();
    let mut candidate: Vec<bool> = (0..n).map(|s| imdp.terminal[s].is_none()).collect();
    loop {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                if !candidate[s] {
                    return Vec::new();
                }
                let mut v: Vec<usize> = imdp.actions[s]
                    .iter()
                    .filter(|d| can_stay(d, |t| candidate[t]))
                    .flat_map(|d| {
                        d.successors
                            .iter()
                            .filter(|(t, i)| candidate[*t] && i.hi > 0.0)
                            .map(|&(t, _)| t)
                    })
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let comps = tarjan(&adj);
        let mut comp_of = vec![usize::MAX; n];
        for (c, comp) in comps.iter().enumerate() {
            for &s in comp {
                comp_of[s] = c;
            }
        }
        let mut changed = false;
        for s in 0..n {
            let c = comp_of[s];
            if candidate[s]
                && !imdp.actions[s]
                    .iter()
                    .any(|d| can_stay(d, |t| comp_of[t] == c))
            {
                candidate[s] = false;
                changed = true;
            }
        }
        if !changed {
            let mut result: Vec<Vec<usize>> = comps
                .into_iter()
                .filter(|comp| candidate[comp[0]])
                .collect();
            result.sort();
            return result;
        }
    }
}

struct EndComponent {
    inside: Vec<bool>,
    states: Vec<usize>,
}

/// Caps the upper values of an end component by its best way out.
fn deflate(imdp: &IntervalMdp, ec: &EndComponent, hi: &mut [f64]) {
    let mut best: f64 = 0.0;
    for &s in &ec.states {
        for d in &imdp.actions[s] {
            let exit = if can_stay(d, |t| ec.inside[t]) {
                d.successors
                    .iter()
                    .filter(|(t, i)| !ec.inside[*t] && i.hi > 0.0)
                    .map(|&(t, _)| hi[t])
                    .fold(0.0, f64::max)
            } else {
                inner(d, hi, Direction::Optimistic)
            };
            best = best.max(exit);
        }
    }
    for &s in &ec.states {
        if hi[s] > best {
            hi[s] = best;
        }
    }
}

/// Interval iteration: a pessimistic lower sequence from 0 and an optimistic upper
/// sequence from 1, swept Gauss-Seidel style in reverse topological order.
///
/// Stops once a sweep changes no value by `kappa / 4` or more.
pub fn interval_iteration(imdp: &IntervalMdp, kappa: f64) -> Result<ValueBounds, SolverError> {
    interval_iteration_capped(imdp, kappa, MAX_SWEEPS)
}

pub fn interval_iteration_capped(
    imdp: &IntervalMdp,
    kappa: f64,
    max_sweeps: usize,
) -> Result<ValueBounds, SolverError> {
    assert!(kappa > 0.0, "precision must be positive");
    let n = imdp.num_states();
    let mut lo = vec![0.0; n];
    let mut hi = vec![1.0; n];
    for s in 0..n {
        if let Some(t) = imdp.terminal[s] {
            lo[s] = t.lo;
            hi[s] = t.hi;
        }
    }
    // Tarjan emits sinks first, which is the order in which values settle.
    let order: Vec<usize> = tarjan(&imdp.adjacency())
        .into_iter()
        .flatten()
        .filter(|&s| imdp.terminal[s].is_none())
        .collect();
    let ecs: Vec<EndComponent> = possible_end_components(imdp)
        .into_iter()
        .map(|states| {
            let mut inside = vec![false; n];
            for &s in &states {
                inside[s] = true;
            }
            EndComponent { inside, states }
        })
        .collect();

    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut change: f64 = 0.0;
        for &s in &order {
            let best_lo = imdp.actions[s]
                .iter()
                .map(|d| inner(d, &lo, Direction::Pessimistic))
                .fold(0.0, f64::max);
            let best_hi = imdp.actions[s]
                .iter()
                .map(|d| inner(d, &hi, Direction::Optimistic))
                .fold(0.0, f64::max);
            let new_lo = best_lo.max(lo[s]).min(1.0);
            let new_hi = best_hi.min(hi[s]).max(new_lo);
            change = change.max(new_lo - lo[s]).max(hi[s] - new_hi);
            lo[s] = new_lo;
            hi[s] = new_hi;
        }
        for ec in &ecs {
            let before: Vec<f64> = ec.states.iter().map(|&s| hi[s]).collect();
            deflate(imdp, ec, &mut hi);
            for (k, &s) in ec.states.iter().enumerate() {
                hi[s] = hi[s].max(lo[s]);
                change = change.max(before[k] - hi[s]);
            }
        }
        let gap = hi[imdp.initial] - lo[imdp.initial];
        if change < kappa / 4.0 {
            return Ok(ValueBounds {
                lo,
                hi,
                iterations: sweeps,
                gap,
            });
        }
        if sweeps >= max_sweeps {
            return Err(SolverError::IterationCap {
                sweeps,
                gap,
                partial: Box::new(ValueBounds {
                    lo,
                    hi,
                    iterations: sweeps,
                    gap,
                }),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dist(v: &[(usize, f64, f64)]) -> IntervalDistribution {
        IntervalDistribution::new(
            v.iter()
                .map(|&(t, lo, hi)| (t, Interval::new(lo, hi).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    /// 0: initial, 1: GOAL, 2: SINK.
    fn coin(lo: f64, hi: f64) -> IntervalMdp {
        IntervalMdp::new(
            0,
            vec![None, Some(Terminal::GOAL), Some(Terminal::SINK)],
            vec![
                vec![dist(&[(1, lo, hi), (2, 1.0 - hi, 1.0 - lo)])],
                vec![],
                vec![],
            ],
        )
        .unwrap()
    }

    #[test]
    fn degenerate_intervals_give_expectation() {
        let d = dist(&[(0, 0.3, 0.3), (1, 0.7, 0.7)]);
        let v = [1.0, 0.5];
        for dir in [Direction::Optimistic, Direction::Pessimistic] {
            assert!((robust_bellman(&d, &v, dir).unwrap() - 0.65).abs() < 1e-15);
        }
    }

    #[test]
    fn goal_sink_example() {
        let d = dist(&[(0, 0.2, 0.6), (1, 0.4, 0.8)]);
        let v = [1.0, 0.0];
        assert!((robust_bellman(&d, &v, Direction::Optimistic).unwrap() - 0.6).abs() < 1e-15);
        assert!((robust_bellman(&d, &v, Direction::Pessimistic).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn infeasible_intervals_are_rejected() {
        let bad = IntervalDistribution {
            successors: vec![(0, Interval::point(0.7)), (1, Interval::point(0.7))],
        };
        assert!(matches!(
            robust_bellman(&bad, &[0.0, 1.0], Direction::Optimistic),
            Err(SolverError::Infeasible { .. })
        ));
        assert!(IntervalDistribution::new(vec![(0, Interval::new(0.0, 0.4).unwrap())]).is_err());
    }

    #[test]
    fn deterministic_path_to_goal() {
        let imdp = IntervalMdp::new(
            0,
            vec![None, None, Some(Terminal::GOAL)],
            vec![
                vec![dist(&[(1, 1.0, 1.0)])],
                vec![dist(&[(2, 1.0, 1.0)])],
                vec![],
            ],
        )
        .unwrap();
        let b = interval_iteration(&imdp, 1e-6).unwrap();
        assert_eq!(b.lo, vec![1.0, 1.0, 1.0]);
        assert_eq!(b.hi, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn trivial_coin_is_uninformative() {
        let b = interval_iteration(&coin(0.0, 1.0), 1e-6).unwrap();
        assert_eq!((b.lo[0], b.hi[0]), (0.0, 1.0));
    }

    #[test]
    fn narrow_coin() {
        let b = interval_iteration(&coin(0.4, 0.45), 1e-6).unwrap();
        assert!((b.lo[0] - 0.4).abs() < 1e-15 && (b.hi[0] - 0.45).abs() < 1e-15);
        assert!((b.gap - 0.05).abs() < 1e-12);
    }

    #[test]
    fn possible_self_loop_does_not_block_the_upper_bound() {
        // 0 may loop on itself or move to 1, which reaches GOAL with probability exactly 1/2.
        let imdp = IntervalMdp::new(
            0,
            vec![None, None, Some(Terminal::GOAL), Some(Terminal::SINK)],
            vec![
                vec![dist(&[(0, 0.0, 1.0), (1, 0.0, 1.0)])],
                vec![dist(&[(2, 0.5, 0.5), (3, 0.5, 0.5)])],
                vec![],
                vec![],
            ],
        )
        .unwrap();
        let b = interval_iteration(&imdp, 1e-9).unwrap();
        assert_eq!(b.lo[0], 0.0);
        assert!((b.hi[0] - 0.5).abs() < 1e-12, "{b:?}");
    }

    #[test]
    fn end_component_with_two_exits() {
        // 0 <-> 1 internally; 0 exits with value 0.3, 1 with value 0.8.
        let imdp = IntervalMdp::new(
            0,
            vec![None, None, Some(Terminal::GOAL), Some(Terminal::SINK)],
            vec![
                vec![
                    dist(&[(1, 1.0, 1.0)]),
                    dist(&[(2, 0.3, 0.3), (3, 0.7, 0.7)]),
                ],
                vec![
                    dist(&[(0, 1.0, 1.0)]),
                    dist(&[(2, 0.8, 0.8), (3, 0.2, 0.2)]),
                ],
                vec![],
                vec![],
            ],
        )
        .unwrap();
        let b = interval_iteration(&imdp, 1e-9).unwrap();
        assert!(
            (b.lo[0] - 0.8).abs() < 1e-9 && (b.hi[0] - 0.8).abs() < 1e-9,
            "{b:?}"
        );
    }

    #[test]
    fn sweep_cap_reports_partial_bounds() {
        let imdp = IntervalMdp::new(
            0,
            vec![None, Some(Terminal::GOAL), Some(Terminal::SINK)],
            vec![
                vec![dist(&[(0, 0.9, 0.9), (1, 0.05, 0.05), (2, 0.05, 0.05)])],
                vec![],
                vec![],
            ],
        )
        .unwrap();
        match interval_iteration_capped(&imdp, 1e-12, 3) {
            Err(SolverError::IterationCap {
                sweeps, partial, ..
            }) => {
                assert_eq!(sweeps, 3);
                assert!(partial.lo[0] <= 0.5 && partial.hi[0] >= 0.5);
            }
            other => panic!("{other:?}"),
        }
    }

    /// Exhaustive oracle: the optimum of a linear function over the box-constrained
    /// simplex is attained at a vertex where all but one coordinate sit at a bound.
    fn vertex_oracle(d: &IntervalDistribution, v: &[f64], maximise: bool) -> f64 {
        let k = d.successors.len();
        let mut best: Option<f64> = None;
        for free in 0..k {
            for mask in 0..(1u32 << k) {
                let mut p = vec![0.0; k];
                let mut sum = 0.0;
                for i in 0..k {
                    if i == free {
                        continue;
                    }
                    let iv = d.successors[i].1;
                    p[i] = if mask & (1 << i) != 0 { iv.hi } else { iv.lo };
                    sum += p[i];
                }
                p[free] = 1.0 - sum;
                let iv = d.successors[free].1;
                if p[free] < iv.lo - 1e-12 || p[free] > iv.hi + 1e-12 {
                    continue;
                }
                let val: f64 = (0..k).map(|i| p[i] * v[d.successors[i].0]).sum();
                best = Some(match best {
                    None => val,
                    Some(b) if maximise => b.max(val),
                    Some(b) => b.min(val),
                });
            }
        }
        best.expect("feasible distributions have a vertex")
    }

    fn feasible_distribution() -> impl Strategy<Value = (IntervalDistribution, Vec<f64>)> {
        (
            proptest::collection::vec((0.0f64..1.0, 0.0f64..0.5, 0.0f64..0.5), 3),
            proptest::collection::vec(0.0f64..1.0, 3),
        )
            .prop_map(|(raw, values)| {
                let total: f64 = raw.iter().map(|r| r.0).sum::<f64>().max(1e-9);
                let succ = raw
                    .iter()
                    .enumerate()
                    .map(|(t, &(w, a, b))| {
                        let p = w / total;
                        (
                            t,
                            Interval::new((p - a).max(0.0), (p + b).min(1.0)).unwrap(),
                        )
                    })
                    .collect();
                (IntervalDistribution::new(succ).unwrap(), values)
            })
    }

    proptest! {
        #[test]
        fn greedy_matches_vertex_oracle((d, v) in feasible_distribution()) {
            let opt = robust_bellman(&d, &v, Direction::Optimistic).unwrap();
            let pes = robust_bellman(&d, &v, Direction::Pessimistic).unwrap();
            prop_assert!((opt - vertex_oracle(&d, &v, true)).abs() < 1e-9);
            prop_assert!((pes - vertex_oracle(&d, &v, false)).abs() < 1e-9);
        }

        #[test]
        fn extremal_distribution_is_feasible((d, v) in feasible_distribution()) {
            for dir in [Direction::Optimistic, Direction::Pessimistic] {
                let p = extremal_distribution(&d, &v, dir);
                let total: f64 = p.iter().map(|x| x.1).sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
                for ((_, q), (_, iv)) in p.iter().zip(&d.successors) {
                    prop_assert!(*q >= iv.lo - 1e-12 && *q <= iv.hi + 1e-12);
                }
            }
        }

        #[test]
        fn narrower_intervals_never_widen_bounds(p in 0.05f64..0.95, a in 0.0f64..0.05, b in 0.0f64..0.05, s in 0.0f64..1.0) {
            let wide = coin((p - a - 0.04).max(0.0), (p + b + 0.04).min(1.0));
            let narrow = coin((p - a * s).max(0.0), (p + b * s).min(1.0));
            let w = interval_iteration(&wide, 1e-9).unwrap();
            let n = interval_iteration(&narrow, 1e-9).unwrap();
            prop_assert!(n.lo[0] >= w.lo[0] - 1e-12 && n.hi[0] <= w.hi[0] + 1e-12);
        }
    }
}
