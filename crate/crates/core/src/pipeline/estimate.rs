//! Interval MDPs built from sample counts.

use crate::binomial::{CiError, CiMethod, SampleCounts};
use crate::budget::{BudgetPlan, EstimationTask, TaskShape};
use crate::graph::Quotient;
use crate::model::Mdp;
use crate::sampler::CountsTable;
use crate::solver::{Interval, IntervalDistribution, IntervalMdp, SolverError, Terminal};

use super::PipelineError;

/// Confidence interval for `k` out of `n`, widened to contain the empirical rate.
///
/// `n = 0` gives `[0, 1]`. The widening is a no-op for the sound methods.
pub fn transition_interval(
    method: CiMethod,
    n: u64,
    k: u64,
    delta_t: f64,
) -> Result<Interval, CiError> {
    let ci = method.interval_or_trivial(SampleCounts::new(n, k)?, delta_t)?;
    if n == 0 {
        return Ok(Interval::TRIVIAL);
    }
    let p = k as f64 / n as f64;
    Ok(Interval {
        lo: ci.lo.min(p),
        hi: ci.hi.max(p),
    })
}

/// The successor of a two-successor task whose probability is estimated:
/// the one seen more often, ties going to the smaller id.
pub fn complement_pivot(counts: &CountsTable, task: &EstimationTask) -> usize {
    let c = counts.get(task.state, task.action);
    let (a, b) = (task.successors[0], task.successors[1]);
    if c.k(b) > c.k(a) {
        b
    } else {
        a
    }
}

/// Interval distribution of one task under its plan budget.
pub fn task_distribution(
    counts: &CountsTable,
    task: &EstimationTask,
    method: CiMethod,
    delta_t: f64,
) -> Result<IntervalDistribution, PipelineError> {
    let c = counts.get(task.state, task.action);
    let successors = match task.shape {
        TaskShape::Direct => task
            .successors
            .iter()
            .map(|&t| Ok((t, transition_interval(method, c.n, c.k(t), delta_t)?)))
            .collect::<Result<Vec<_>, CiError>>()?,
        TaskShape::Complement => {
            let pivot = complement_pivot(counts, task);
            let partner = if pivot == task.successors[0] {
                task.successors[1]
            } else {
                task.successors[0]
            };
            let i = transition_interval(method, c.n, c.k(pivot), delta_t)?;
            vec![
                (pivot, i),
                (
                    partner,
                    Interval {
                        lo: 1.0 - i.hi,
                        hi: 1.0 - i.lo,
                    },
                ),
            ]
        }
    };
    Ok(IntervalDistribution::new(successors)?)
}

/// The interval MDP of a transformed model: terminals become `GOAL` or `SINK`,
/// deterministic distributions without a task are exact, and every task gets the
/// intervals of its budget.
pub fn grey_imdp(
    q: &Quotient,
    tasks: &[EstimationTask],
    plan: &BudgetPlan,
    counts: &CountsTable,
    method: CiMethod,
) -> Result<IntervalMdp, PipelineError> {
    let g = q.model();
    let n = g.num_states();
    let terminal = (0..n)
        .map(|x| {
            g.is_terminal(x).then(|| {
                if g.is_target(x) {
                    Terminal::GOAL
                } else {
                    Terminal::SINK
                }
            })
        })
        .collect();
    let mut actions: Vec<Vec<Option<IntervalDistribution>>> = (0..n)
        .map(|x| {
            g.actions(x)
                .iter()
                .map(|a| match a.successors.as_slice() {
                    &[t] => Some(IntervalDistribution {
                        successors: vec![(t, Interval::point(1.0))],
                    }),
                    _ => None,
                })
                .collect()
        })
        .collect();
    for (i, task) in tasks.iter().enumerate() {
        actions[task.state][task.action] =
            Some(task_distribution(counts, task, method, plan.delta_t(i))?);
    }
    let actions = actions
        .into_iter()
        .map(|acts| {
            acts.into_iter()
                .map(|d| d.expect("every multi-successor action has a task"))
                .collect()
        })
        .collect();
    Ok(IntervalMdp::new(g.initial(), terminal, actions)?)
}

/// The interval MDP of the ground model in black mode.
///
/// An extra terminal with value `[0, 1]` stands for every successor not yet
/// observed; it is attached to each action whose support is not complete.
pub fn black_imdp(
    m: &Mdp,
    counts: &CountsTable,
    complete: &[Vec<bool>],
    method: CiMethod,
    delta_t: f64,
) -> Result<IntervalMdp, PipelineError> {
    let n = m.num_states();
    let unknown = n;
    let mut terminal: Vec<Option<Terminal>> = (0..n)
        .map(|s| m.is_target(s).then_some(Terminal::GOAL))
        .collect();
    terminal.push(Some(Terminal::UNKNOWN));
    let mut actions = Vec::with_capacity(n + 1);
    for (s, done) in complete.iter().enumerate() {
        if m.is_target(s) {
            actions.push(Vec::new());
            continue;
        }
        let mut acts = Vec::with_capacity(done.len());
        for (a, &done) in done.iter().enumerate() {
            let c = counts.get(s, a);
            let mut successors = c
                .successors
                .iter()
                .map(|&(t, k)| Ok((t, transition_interval(method, c.n, k, delta_t)?)))
                .collect::<Result<Vec<_>, CiError>>()?;
            if !done {
                successors.push((unknown, Interval::TRIVIAL));
            }
            acts.push(IntervalDistribution::new(successors)?);
        }
        actions.push(acts);
    }
    actions.push(Vec::new());
    Ok(IntervalMdp::new(m.initial(), terminal, actions)?)
}

impl From<SolverError> for PipelineError {
    fn from(e: SolverError) -> Self {
        PipelineError::Solver(e)
    }
}
