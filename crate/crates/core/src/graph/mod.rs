//! Support-only structural analyses and the quotient constructions built on them.

mod fragment;
mod quotient;

pub use fragment::{
    chain_candidates, exact_macro_distribution, fragment_cost, scc_candidates, Fragment,
    FragmentError, MAX_STRATEGIES,
};
pub use quotient::{
    collapse_mecs, eliminate_chains, fragment_quotient, merge_value_classes, prepare,
    quotient_scc_fragments, Location, Quotient, QuotientMap, Recipe, StateOrigin, TransformConfig,
    TransformKind, TransformReport,
};

use crate::model::SupportMdp;

/// Strongly connected components in reverse topological order (sinks first).
pub fn sccs(g: &SupportMdp) -> Vec<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..g.num_states())
        .map(|s| {
            let mut v: Vec<usize> = g.post(s).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    tarjan(&adj)
}

/// Iterative Tarjan over an adjacency list; components come out sinks first.
pub(crate) fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// One maximal end component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mec {
    /// Sorted member states.
    pub states: Vec<usize>,
    /// Retained `(state, action)` pairs whose support stays inside the MEC.
    pub actions: Vec<(usize, usize)>,
}

impl Mec {
    pub fn retains(&self, s: usize, a: usize) -> bool {
        self.actions.binary_search(&(s, a)).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecDecomposition {
    pub mecs: Vec<Mec>,
    /// MEC index of every state, if any.
    pub state_mec: Vec<Option<usize>>,
}

/// Maximal end components of the whole model.
pub fn mec_decomposition(g: &SupportMdp) -> MecDecomposition {
    mec_decomposition_within(g, &vec![true; g.num_states()])
}

/// Maximal end components of the sub-model induced by `allowed` states.
///
/// Actions whose support leaves the allowed set never belong to an end component.
pub fn mec_decomposition_within(g: &SupportMdp, allowed: &[bool]) -> MecDecomposition {
    let n = g.num_states();
    let mut alive: Vec<bool> = allowed.to_vec();
    let mut enabled: Vec<Vec<bool>> = (0..n)
        .map(|s| {
            g.actions(s)
                .iter()
                .map(|a| alive[s] && a.successors.iter().all(|&t| allowed[t]))
                .collect()
        })
        .collect();
    for s in 0..n {
        if !enabled[s].iter().any(|&e| e) {
            alive[s] = false;
        }
    }
    loop {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                if !alive[s] {
                    return Vec::new();
                }
                let mut v: Vec<usize> = g
                    .actions(s)
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| enabled[s][a])
                    .flat_map(|(_, act)| act.successors.iter().copied())
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let comps = tarjan(&adj);
        let mut comp_of = vec![usize::MAX; n];
        for (i, c) in comps.iter().enumerate() {
            for &s in c {
                comp_of[s] = i;
            }
        }
        let mut changed = false;
        for s in 0..n {
            if !alive[s] {
                continue;
            }
            for (a, act) in g.actions(s).iter().enumerate() {
                if enabled[s][a]
                    && act
                        .successors
                        .iter()
                        .any(|&t| !alive[t] || comp_of[t] != comp_of[s])
                {
                    enabled[s][a] = false;
                    changed = true;
                }
            }
            if !enabled[s].iter().any(|&e| e) {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            let mut mecs = Vec::new();
            let mut state_mec = vec![None; n];
            for c in comps {
                if !alive[c[0]] {
                    continue;
                }
                let idx = mecs.len();
                let mut actions = Vec::new();
                for &s in &c {
                    state_mec[s] = Some(idx);
                    actions.extend(
                        enabled[s]
                            .iter()
                            .enumerate()
                            .filter(|e| *e.1)
                            .map(|(a, _)| (s, a)),
                    );
                }
                mecs.push(Mec { states: c, actions });
            }
            mecs.sort_by_key(|m| m.states[0]);
            for (i, m) in mecs.iter().enumerate() {
                for &s in &m.states {
                    state_mec[s] = Some(i);
                }
            }
            return MecDecomposition { mecs, state_mec };
        }
    }
}

/// States from which no path reaches a target.
pub fn value0_states(g: &SupportMdp) -> Vec<bool> {
    let pre = g.predecessors();
    let mut reach = vec![false; g.num_states()];
    let mut queue: Vec<usize> = (0..g.num_states()).filter(|&s| g.is_target(s)).collect();
    for &t in &queue {
        reach[t] = true;
    }
    while let Some(t) = queue.pop() {
        for &(s, _) in &pre[t] {
            if !reach[s] {
                reach[s] = true;
                queue.push(s);
            }
        }
    }
    reach.into_iter().map(|r| !r).collect()
}

/// States from which some strategy reaches a target almost surely.
pub fn value1_states(g: &SupportMdp) -> Vec<bool> {
    let n = g.num_states();
    let pre = g.predecessors();
    let mut keep = vec![true; n];
    loop {
        // Backward reachability from the targets using only actions that stay in `keep`.
        let mut reach = vec![false; n];
        let mut queue: Vec<usize> = (0..n).filter(|&s| g.is_target(s) && keep[s]).collect();
        for &t in &queue {
            reach[t] = true;
        }
        while let Some(t) = queue.pop() {
            for &(s, a) in &pre[t] {
                if reach[s] || !keep[s] {
                    continue;
                }
                if g.successors(s, a).iter().all(|&u| keep[u]) {
                    reach[s] = true;
                    queue.push(s);
                }
            }
        }
        if reach == keep {
            return keep;
        }
        keep = reach;
    }
}

/// States reachable from the initial state.
pub fn reachable_states(g: &SupportMdp) -> Vec<bool> {
    let mut seen = vec![false; g.num_states()];
    let mut queue = vec![g.initial()];
    seen[g.initial()] = true;
    while let Some(s) = queue.pop() {
        for t in g.post(s) {
            if !seen[t] {
                seen[t] = true;
                queue.push(t);
            }
        }
    }
    seen
}
