//! Fragments: target-free, end-component-free state sets replaced by macro-actions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::quotient::Quotient;
use super::{mec_decomposition_within, sccs};
use crate::linalg;
use crate::model::{Mdp, SupportMdp};

/// Upper limit on internal strategies enumerated for one entering action.
pub const MAX_STRATEGIES: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FragmentError {
    #[error("fragment is empty")]
    Empty,
    #[error("fragment contains target state `{0}`")]
    ContainsTarget(String),
    #[error("fragment contains the initial state")]
    ContainsInitial,
    #[error("fragment state `{0}` is terminal")]
    Terminal(String),
    #[error("fragment state `{0}` is not an original state")]
    NotGround(String),
    #[error("fragment state `{0}` already carries macro-actions")]
    NestedMacro(String),
    #[error("fragment contains an end component; collapse end components first")]
    EndComponent,
    #[error("fragment has more than {MAX_STRATEGIES} internal strategies")]
    TooManyStrategies,
}

/// A candidate set of states to abstract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    /// Sorted states of R.
    pub states: Vec<usize>,
    /// States of R with an incoming transition from outside.
    pub entries: Vec<usize>,
    /// Actions `(t, j)` outside R with a successor in R.
    pub entering: Vec<(usize, usize)>,
    /// States outside R reached by a transition from R.
    pub exits: Vec<usize>,
    /// Product of the action counts over R (saturating).
    pub strategy_count: usize,
}

impl Fragment {
    pub fn new(g: &SupportMdp, mut states: Vec<usize>) -> Self {
        states.sort_unstable();
        states.dedup();
        let mut in_r = vec![false; g.num_states()];
        for &r in &states {
            in_r[r] = true;
        }
        let mut entries = BTreeSet::new();
        let mut entering = Vec::new();
        for t in 0..g.num_states() {
            if in_r[t] {
                continue;
            }
            for (j, a) in g.actions(t).iter().enumerate() {
                let hits: Vec<usize> = a.successors.iter().copied().filter(|&y| in_r[y]).collect();
                if !hits.is_empty() {
                    entering.push((t, j));
                    entries.extend(hits);
                }
            }
        }
        let exits: BTreeSet<usize> = states
            .iter()
            .flat_map(|&r| g.post(r))
            .filter(|&y| !in_r[y])
            .collect();
        let strategy_count = states.iter().fold(1usize, |acc, &r| {
            acc.saturating_mul(g.actions(r).len().max(1))
        });
        Fragment {
            states,
            entries: entries.into_iter().collect(),
            entering,
            exits: exits.into_iter().collect(),
            strategy_count,
        }
    }

    fn membership(&self, n: usize) -> Vec<bool> {
        let mut v = vec![false; n];
        for &r in &self.states {
            v[r] = true;
        }
        v
    }
}

/// Checks the structural preconditions of a fragment on a support model.
pub fn validate(g: &SupportMdp, f: &Fragment) -> Result<(), FragmentError> {
    if f.states.is_empty() {
        return Err(FragmentError::Empty);
    }
    for &r in &f.states {
        if g.is_target(r) {
            return Err(FragmentError::ContainsTarget(g.name(r).into()));
        }
        if r == g.initial() {
            return Err(FragmentError::ContainsInitial);
        }
        if g.is_terminal(r) {
            return Err(FragmentError::Terminal(g.name(r).into()));
        }
    }
    if f.strategy_count > MAX_STRATEGIES {
        return Err(FragmentError::TooManyStrategies);
    }
    let in_r = f.membership(g.num_states());
    if !mec_decomposition_within(g, &in_r).mecs.is_empty() {
        return Err(FragmentError::EndComponent);
    }
    Ok(())
}

/// One internal strategy restricted to the states it can reach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Strategy {
    /// `(state, action)` pairs sorted by state.
    pub choices: Vec<(usize, usize)>,
    /// Exits reachable under the strategy.
    pub exits: Vec<usize>,
}

pub(crate) struct Plan {
    pub entering: Vec<(usize, usize, Vec<Strategy>)>,
}

/// All distinct reachable-restricted strategies starting from `starts`.
fn strategies_from(
    g: &SupportMdp,
    in_r: &[bool],
    starts: &[usize],
) -> Result<Vec<Strategy>, FragmentError> {
    fn rec(
        g: &SupportMdp,
        in_r: &[bool],
        assigned: &mut BTreeMap<usize, usize>,
        pending: &mut Vec<usize>,
        out: &mut Vec<Strategy>,
    ) -> Result<(), FragmentError> {
        let next = loop {
            match pending.pop() {
                None => break None,
                Some(r) if assigned.contains_key(&r) => continue,
                Some(r) => break Some(r),
            }
        };
        let Some(r) = next else {
            if out.len() >= MAX_STRATEGIES {
                return Err(FragmentError::TooManyStrategies);
            }
            let exits: BTreeSet<usize> = assigned
                .iter()
                .flat_map(|(&s, &c)| g.successors(s, c).iter().copied())
                .filter(|&y| !in_r[y])
                .collect();
            out.push(Strategy {
                choices: assigned.iter().map(|(&s, &c)| (s, c)).collect(),
                exits: exits.into_iter().collect(),
            });
            return Ok(());
        };
        for c in 0..g.actions(r).len() {
            assigned.insert(r, c);
            let saved = pending.len();
            let mut extra: Vec<usize> = g
                .successors(r, c)
                .iter()
                .copied()
                .filter(|&y| in_r[y] && !assigned.contains_key(&y))
                .collect();
            extra.reverse();
            pending.extend(extra);
            let mut snapshot = pending.clone();
            rec(g, in_r, assigned, &mut snapshot, out)?;
            pending.truncate(saved);
            assigned.remove(&r);
        }
        pending.push(r);
        Ok(())
    }

    let mut pending: Vec<usize> = starts.iter().rev().copied().collect();
    let mut out = Vec::new();
    rec(g, in_r, &mut BTreeMap::new(), &mut pending, &mut out)?;
    Ok(out)
}

pub(crate) fn plan(q: &Quotient, f: &Fragment) -> Result<Plan, FragmentError> {
    let g = q.model();
    validate(g, f)?;
    for &r in &f.states {
        if !q.origin(r).is_ground() {
            return Err(FragmentError::NotGround(g.name(r).into()));
        }
        if f.states.len() > 1 && (0..g.actions(r).len()).any(|c| !q.node(q.root(r, c)).is_plain()) {
            return Err(FragmentError::NestedMacro(g.name(r).into()));
        }
    }
    plan_on(g, f)
}

fn plan_on(g: &SupportMdp, f: &Fragment) -> Result<Plan, FragmentError> {
    let in_r = f.membership(g.num_states());
    let mut entering = Vec::with_capacity(f.entering.len());
    for &(t, j) in &f.entering {
        let starts: Vec<usize> = g
            .successors(t, j)
            .iter()
            .copied()
            .filter(|&y| in_r[y])
            .collect();
        entering.push((t, j, strategies_from(g, &in_r, &starts)?));
    }
    Ok(Plan { entering })
}

/// Learnable probabilities of a distribution with `k` successors.
pub(crate) fn learnable(k: usize, small_support: bool) -> usize {
    if small_support {
        match k {
            0 | 1 => 0,
            2 => 1,
            k => k,
        }
    } else {
        k
    }
}

/// Learnable probabilities touched by the fragment, before and after quotienting.
pub(crate) fn learnable_costs(
    q: &Quotient,
    f: &Fragment,
    small_support: bool,
) -> Result<(usize, usize), FragmentError> {
    let g = q.model();
    let plan = plan(q, f)?;
    let in_r = f.membership(g.num_states());
    let mut before = 0;
    let mut after = 0;
    for &r in &f.states {
        for a in g.actions(r) {
            before += learnable(a.successors.len(), small_support);
        }
    }
    for (t, j, strategies) in &plan.entering {
        let succ = g.successors(*t, *j);
        before += learnable(succ.len(), small_support);
        for s in strategies {
            let mut all: BTreeSet<usize> = succ.iter().copied().filter(|&y| !in_r[y]).collect();
            all.extend(s.exits.iter().copied());
            if q.origin(*t).is_mec() {
                all.remove(t);
            }
            after += learnable(all.len(), small_support);
        }
    }
    Ok((before, after))
}

/// Estimated probabilities to learn with and without quotienting a fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentCost {
    /// Macro-probabilities: per entering action and distinct internal strategy, the reachable exits.
    pub quotient_cost: usize,
    /// Transitions originating in the fragment.
    pub direct_cost: usize,
}

pub fn fragment_cost(f: &Fragment, g: &SupportMdp) -> Result<FragmentCost, FragmentError> {
    let plan = plan_on(g, f)?;
    let quotient_cost = plan
        .entering
        .iter()
        .flat_map(|(_, _, s)| s.iter())
        .map(|s| s.exits.len())
        .sum();
    let direct_cost = f
        .states
        .iter()
        .flat_map(|&r| g.actions(r).iter())
        .map(|a| a.successors.len())
        .sum();
    Ok(FragmentCost {
        quotient_cost,
        direct_cost,
    })
}

/// Non-target, non-initial states with exactly one incoming transition.
pub fn chain_candidates(g: &SupportMdp) -> Vec<Fragment> {
    let pre = g.predecessors();
    (0..g.num_states())
        .filter(|&s| {
            s != g.initial()
                && !g.is_target(s)
                && !g.is_terminal(s)
                && pre[s].len() == 1
                && pre[s][0].0 != s
        })
        .map(|s| Fragment::new(g, vec![s]))
        .collect()
}

/// Non-trivial SCCs free of targets, terminals and the initial state.
pub fn scc_candidates(g: &SupportMdp) -> Vec<Fragment> {
    sccs(g)
        .into_iter()
        .filter(|c| {
            c.len() > 1
                && c.iter()
                    .all(|&s| s != g.initial() && !g.is_target(s) && !g.is_terminal(s))
        })
        .map(|c| Fragment::new(g, c))
        .collect()
}

pub(crate) fn quotient_chain_candidates(q: &Quotient) -> Vec<Fragment> {
    chain_candidates(q.model())
        .into_iter()
        .filter(|f| q.origin(f.states[0]).is_ground())
        .collect()
}

pub(crate) fn quotient_scc_candidates(q: &Quotient) -> Vec<Fragment> {
    scc_candidates(q.model())
        .into_iter()
        .filter(|f| f.states.iter().all(|&r| q.origin(r).is_ground()))
        .collect()
}

/// Exact exit distribution of entering `(t, a)` and then following `strategy`
/// inside `states` (all ground ids). Successors of `(t, a)` outside the fragment
/// keep their probability.
pub fn exact_macro_distribution(
    m: &Mdp,
    states: &[usize],
    entry: (usize, usize),
    strategy: &BTreeMap<usize, usize>,
) -> BTreeMap<usize, f64> {
    let mut index = vec![usize::MAX; m.num_states()];
    for (i, &r) in states.iter().enumerate() {
        index[r] = i + 1;
    }
    let k = states.len() + 1;
    let mut q = vec![Vec::new(); k];
    let mut r = vec![Vec::new(); k];
    let mut add = |row: usize, succ: &[(usize, f64)]| {
        for &(y, p) in succ {
            if index[y] == usize::MAX {
                r[row].push((y, p));
            } else {
                q[row].push((index[y], p));
            }
        }
    };
    add(0, &m.actions(entry.0)[entry.1].successors);
    for (i, &s) in states.iter().enumerate() {
        let c = strategy.get(&s).copied().unwrap_or(0);
        add(i + 1, &m.actions(s)[c].successors);
    }
    linalg::absorption(&q, &r, m.num_states(), 0)
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p > 0.0)
        .collect()
}
