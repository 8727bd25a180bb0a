//! Transformed models and the bookkeeping that maps them back to the ground model.
//!
//! Every action of a transformed model carries a recipe: a ground action to take,
//! followed by continuations for landings inside eliminated states. Executing the
//! recipe on the ground model yields exactly one observation for the transformed
//! action.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::fragment::{self, Fragment, FragmentError};
use super::{mec_decomposition, value0_states, value1_states};
use crate::linalg;
use crate::model::{Action, Mdp, SupportAction, SupportMdp};

/// A memoryless choice as sorted `(state, action)` pairs.
type Strategy = Vec<(usize, usize)>;

/// Where a state of the transformed model comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "ground")]
pub enum StateOrigin {
    Ground(usize),
    Goal(Vec<usize>),
    Sink(Vec<usize>),
    Mec(Vec<usize>),
}

impl StateOrigin {
    pub fn ground_states(&self) -> Vec<usize> {
        match self {
            StateOrigin::Ground(g) => vec![*g],
            StateOrigin::Goal(v) | StateOrigin::Sink(v) | StateOrigin::Mec(v) => v.clone(),
        }
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, StateOrigin::Ground(_))
    }

    pub fn is_mec(&self) -> bool {
        matches!(self, StateOrigin::Mec(_))
    }
}

/// Fate of a ground state in the transformed model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    Live(usize),
    Removed,
    Unreachable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Terminals,
    ValueClasses,
    MecCollapse,
    SccFragment,
    Chain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub kind: TransformKind,
    pub states_before: usize,
    pub states_after: usize,
    pub transitions_before: usize,
    pub transitions_after: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientMap {
    pub locations: Vec<Location>,
    pub transforms: Vec<TransformReport>,
}

impl QuotientMap {
    pub fn class_of(&self, ground: usize) -> Option<usize> {
        match self.locations[ground] {
            Location::Live(x) => Some(x),
            _ => None,
        }
    }
}

/// One step of a recipe: take ground `action` in ground `state`; if the landing
/// ground state is listed in `then`, continue with that node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub state: usize,
    pub action: usize,
    /// Sorted by ground state.
    pub then: Vec<(usize, usize)>,
}

impl Recipe {
    pub fn next(&self, landed: usize) -> Option<usize> {
        self.then
            .binary_search_by_key(&landed, |&(g, _)| g)
            .ok()
            .map(|i| self.then[i].1)
    }

    pub fn is_plain(&self) -> bool {
        self.then.is_empty()
    }
}

/// Which structural transformations to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransformConfig {
    pub equivalence: bool,
    pub scc_fragments: bool,
    pub chains: bool,
    /// Affects how fragment benefits are measured.
    pub small_support: bool,
}

impl TransformConfig {
    pub fn none() -> Self {
        TransformConfig {
            equivalence: false,
            scc_fragments: false,
            chains: false,
            small_support: false,
        }
    }

    pub fn full() -> Self {
        TransformConfig {
            equivalence: true,
            scc_fragments: true,
            chains: true,
            small_support: true,
        }
    }
}

/// A transformed model together with recipes and the ground mapping.
#[derive(Debug, Clone)]
pub struct Quotient {
    ground_states: usize,
    model: SupportMdp,
    origins: Vec<StateOrigin>,
    roots: Vec<Vec<usize>>,
    nodes: Vec<Recipe>,
    map: QuotientMap,
}

#[derive(Debug, Clone)]
pub(crate) struct DraftAction {
    pub label: String,
    pub root: usize,
    pub successors: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct DraftState {
    pub name: String,
    pub origin: StateOrigin,
    pub target: bool,
    pub actions: Vec<DraftAction>,
}

impl Quotient {
    /// The identity quotient of a ground support model.
    pub fn identity(g: &SupportMdp) -> Self {
        let mut nodes = Vec::new();
        let mut roots = Vec::with_capacity(g.num_states());
        for s in 0..g.num_states() {
            let mut r = Vec::new();
            for a in 0..g.actions(s).len() {
                r.push(nodes.len());
                nodes.push(Recipe {
                    state: s,
                    action: a,
                    then: Vec::new(),
                });
            }
            roots.push(r);
        }
        Quotient {
            ground_states: g.num_states(),
            model: g.clone(),
            origins: (0..g.num_states()).map(StateOrigin::Ground).collect(),
            roots,
            nodes,
            map: QuotientMap {
                locations: (0..g.num_states()).map(Location::Live).collect(),
                transforms: Vec::new(),
            },
        }
    }

    /// Runs the full transformation pipeline selected by `cfg`.
    pub fn build(g: &SupportMdp, cfg: TransformConfig) -> Self {
        let mut q = prepare(&Quotient::identity(g));
        if cfg.equivalence {
            q = merge_value_classes(&q);
            q = collapse_mecs(&q);
        }
        if cfg.scc_fragments {
            q = quotient_scc_fragments(&q, cfg.small_support);
        }
        if cfg.chains {
            q = eliminate_chains(&q, cfg.small_support);
        }
        q
    }

    pub fn model(&self) -> &SupportMdp {
        &self.model
    }

    pub fn map(&self) -> &QuotientMap {
        &self.map
    }

    pub fn transforms(&self) -> &[TransformReport] {
        &self.map.transforms
    }

    pub fn origin(&self, x: usize) -> &StateOrigin {
        &self.origins[x]
    }

    pub fn ground_states(&self) -> usize {
        self.ground_states
    }

    pub fn root(&self, x: usize, j: usize) -> usize {
        self.roots[x][j]
    }

    pub fn node(&self, id: usize) -> &Recipe {
        &self.nodes[id]
    }

    pub fn class_of(&self, ground: usize) -> Option<usize> {
        self.map.class_of(ground)
    }

    /// The ground action that starts abstract action `(x, j)`.
    pub fn ground_action(&self, x: usize, j: usize) -> (usize, usize) {
        let n = &self.nodes[self.roots[x][j]];
        (n.state, n.action)
    }

    pub(crate) fn draft(&self) -> Vec<DraftState> {
        (0..self.model.num_states())
            .map(|x| DraftState {
                name: self.model.name(x).to_string(),
                origin: self.origins[x].clone(),
                target: self.model.is_target(x),
                actions: self
                    .model
                    .actions(x)
                    .iter()
                    .enumerate()
                    .map(|(j, a)| DraftAction {
                        label: a.label.clone(),
                        root: self.roots[x][j],
                        successors: a.successors.clone(),
                    })
                    .collect(),
            })
            .collect()
    }

    pub(crate) fn nodes(&self) -> &[Recipe] {
        &self.nodes
    }

    /// Assembles a new quotient from a draft, dropping states unreachable from `initial`.
    pub(crate) fn finish(
        &self,
        draft: Vec<DraftState>,
        initial: usize,
        nodes: Vec<Recipe>,
        kind: TransformKind,
        detail: Option<String>,
    ) -> Quotient {
        let n = draft.len();
        let mut keep = vec![false; n];
        keep[initial] = true;
        let mut stack = vec![initial];
        while let Some(x) = stack.pop() {
            for a in &draft[x].actions {
                for &y in &a.successors {
                    if !keep[y] {
                        keep[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        let mut renum = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if keep[x] {
                renum[x] = next;
                next += 1;
            }
        }
        let mut locations: Vec<Location> = self
            .map
            .locations
            .iter()
            .map(|l| match l {
                Location::Live(_) => Location::Removed,
                other => *other,
            })
            .collect();
        let mut names = Vec::with_capacity(next);
        let mut origins = Vec::with_capacity(next);
        let mut target = Vec::with_capacity(next);
        let mut actions = Vec::with_capacity(next);
        let mut roots = Vec::with_capacity(next);
        for (x, st) in draft.into_iter().enumerate() {
            if !keep[x] {
                for g in st.origin.ground_states() {
                    locations[g] = Location::Unreachable;
                }
                continue;
            }
            for g in st.origin.ground_states() {
                locations[g] = Location::Live(renum[x]);
            }
            names.push(st.name);
            origins.push(st.origin);
            target.push(st.target);
            let mut acts = Vec::with_capacity(st.actions.len());
            let mut rs = Vec::with_capacity(st.actions.len());
            for a in st.actions {
                acts.push(SupportAction {
                    label: a.label,
                    successors: a.successors.iter().map(|&y| renum[y]).collect(),
                });
                rs.push(a.root);
            }
            actions.push(acts);
            roots.push(rs);
        }
        let model = SupportMdp::new(names, renum[initial], target, actions);
        let mut transforms = self.map.transforms.clone();
        transforms.push(TransformReport {
            kind,
            states_before: self.model.num_states(),
            states_after: model.num_states(),
            transitions_before: self.model.transition_count(),
            transitions_after: model.transition_count(),
            detail,
        });
        Quotient {
            ground_states: self.ground_states,
            model,
            origins,
            roots,
            nodes,
            map: QuotientMap {
                locations,
                transforms,
            },
        }
    }

    /// Exact distribution over ground landing states of abstract action `(x, j)`.
    pub fn recipe_distribution(&self, m: &Mdp, x: usize, j: usize) -> Vec<(usize, f64)> {
        let root = self.roots[x][j];
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![root];
        index.insert(root, 0);
        let mut i = 0;
        while i < order.len() {
            let node = &self.nodes[order[i]];
            for &(_, nid) in &node.then {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(nid) {
                    e.insert(order.len());
                    order.push(nid);
                }
            }
            i += 1;
        }
        let mut q = vec![Vec::new(); order.len()];
        let mut r = vec![Vec::new(); order.len()];
        for (i, &nid) in order.iter().enumerate() {
            let node = &self.nodes[nid];
            for &(g, p) in &m.actions(node.state)[node.action].successors {
                match node.next(g) {
                    Some(next) => q[i].push((index[&next], p)),
                    None => r[i].push((g, p)),
                }
            }
        }
        let dist = linalg::absorption(&q, &r, m.num_states(), 0);
        dist.into_iter()
            .enumerate()
            .filter(|&(_, p)| p > 0.0)
            .collect()
    }

    /// The transformed model with exact probabilities derived from the ground truth.
    ///
    /// Terminal states receive a self-loop so that the result is a valid model;
    /// collapsed end components use distributions conditioned on leaving.
    pub fn lift(&self, m: &Mdp) -> Mdp {
        let n = self.model.num_states();
        let mut actions = Vec::with_capacity(n);
        for x in 0..n {
            if self.model.is_terminal(x) {
                actions.push(vec![Action {
                    name: "stay".into(),
                    successors: vec![(x, 1.0)],
                }]);
                continue;
            }
            let mut acts = Vec::new();
            for (j, a) in self.model.actions(x).iter().enumerate() {
                let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
                for (g, p) in self.recipe_distribution(m, x, j) {
                    let y = self.class_of(g).expect("recipes only land in live states");
                    if self.origins[x].is_mec() && y == x {
                        continue;
                    }
                    *mass.entry(y).or_insert(0.0) += p;
                }
                let total: f64 = mass.values().sum();
                let successors: Vec<(usize, f64)> = mass
                    .into_iter()
                    .map(|(y, p)| (y, p / total))
                    .filter(|&(_, p)| p > 0.0)
                    .collect();
                acts.push(Action {
                    name: a.label.clone(),
                    successors,
                });
            }
            actions.push(acts);
        }
        let targets = (0..n).filter(|&x| self.model.is_target(x)).collect();
        Mdp::new(
            self.model.names().to_vec(),
            self.model.initial(),
            targets,
            actions,
        )
        .expect("lifted model is valid")
    }
}

/// Turns targets and states that cannot reach a target into terminals and drops
/// unreachable states.
pub fn prepare(q: &Quotient) -> Quotient {
    let g = q.model();
    let v0 = value0_states(g);
    let mut draft = q.draft();
    for (x, st) in draft.iter_mut().enumerate() {
        if g.is_target(x) || v0[x] {
            st.actions.clear();
        }
    }
    q.finish(
        draft,
        g.initial(),
        q.nodes().to_vec(),
        TransformKind::Terminals,
        None,
    )
}

/// Merges all value-1 states into `GOAL` and all value-0 states into `SINK`.
pub fn merge_value_classes(q: &Quotient) -> Quotient {
    let g = q.model();
    let v1 = value1_states(g);
    let v0 = value0_states(g);
    let n = g.num_states();
    let mut class = vec![usize::MAX; n];
    let mut draft: Vec<DraftState> = Vec::new();
    let old = q.draft();
    for x in 0..n {
        if !v1[x] && !v0[x] {
            class[x] = draft.len();
            draft.push(old[x].clone());
        }
    }
    let add_class = |members: Vec<usize>, name: &str, goal: bool, draft: &mut Vec<DraftState>| {
        if members.is_empty() {
            return usize::MAX;
        }
        let ground: BTreeSet<usize> = members
            .iter()
            .flat_map(|&x| q.origin(x).ground_states())
            .collect();
        let ground: Vec<usize> = ground.into_iter().collect();
        draft.push(DraftState {
            name: name.to_string(),
            origin: if goal {
                StateOrigin::Goal(ground)
            } else {
                StateOrigin::Sink(ground)
            },
            target: goal,
            actions: Vec::new(),
        });
        draft.len() - 1
    };
    let goal = add_class(
        (0..n).filter(|&x| v1[x]).collect(),
        "GOAL",
        true,
        &mut draft,
    );
    let sink = add_class(
        (0..n).filter(|&x| v0[x]).collect(),
        "SINK",
        false,
        &mut draft,
    );
    for x in 0..n {
        if v1[x] {
            class[x] = goal;
        } else if v0[x] {
            class[x] = sink;
        }
    }
    for st in &mut draft {
        for a in &mut st.actions {
            let mut s: Vec<usize> = a.successors.iter().map(|&y| class[y]).collect();
            s.sort_unstable();
            s.dedup();
            a.successors = s;
        }
    }
    let merged = (0..n).filter(|&x| v1[x] || v0[x]).count();
    q.finish(
        draft,
        class[g.initial()],
        q.nodes().to_vec(),
        TransformKind::ValueClasses,
        Some(format!("{merged} states merged into value classes")),
    )
}

/// Replaces every maximal end component by one state carrying its leaving actions.
pub fn collapse_mecs(q: &Quotient) -> Quotient {
    let g = q.model();
    let d = mec_decomposition(g);
    let n = g.num_states();
    let old = q.draft();
    let mut class = vec![usize::MAX; n];
    let mut mec_slot = vec![usize::MAX; d.mecs.len()];
    let mut draft: Vec<DraftState> = Vec::new();
    for x in 0..n {
        match d.state_mec[x] {
            None => {
                class[x] = draft.len();
                draft.push(old[x].clone());
            }
            Some(m) => {
                if mec_slot[m] == usize::MAX {
                    let mec = &d.mecs[m];
                    let ground: BTreeSet<usize> = mec
                        .states
                        .iter()
                        .flat_map(|&y| q.origin(y).ground_states())
                        .collect();
                    let names: Vec<&str> = mec.states.iter().map(|&y| g.name(y)).collect();
                    mec_slot[m] = draft.len();
                    draft.push(DraftState {
                        name: format!("{{{}}}", names.join(",")),
                        origin: StateOrigin::Mec(ground.into_iter().collect()),
                        target: false,
                        actions: Vec::new(),
                    });
                }
                class[x] = mec_slot[m];
            }
        }
    }
    for (m, mec) in d.mecs.iter().enumerate() {
        let slot = mec_slot[m];
        let mut acts = Vec::new();
        for &y in &mec.states {
            for (j, a) in old[y].actions.iter().enumerate() {
                if mec.retains(y, j) {
                    continue;
                }
                acts.push(DraftAction {
                    label: format!("{}.{}", old[y].name, a.label),
                    root: a.root,
                    successors: a.successors.clone(),
                });
            }
        }
        draft[slot].actions = acts;
    }
    for (x, st) in draft.iter_mut().enumerate() {
        let is_mec = st.origin.is_mec();
        for a in &mut st.actions {
            let mut s: Vec<usize> = a
                .successors
                .iter()
                .map(|&y| class[y])
                .filter(|&y| !(is_mec && y == x))
                .collect();
            s.sort_unstable();
            s.dedup();
            a.successors = s;
        }
        st.actions.retain(|a| !a.successors.is_empty());
    }
    let collapsed = d.mecs.iter().filter(|m| m.states.len() > 1).count();
    q.finish(
        draft,
        class[g.initial()],
        q.nodes().to_vec(),
        TransformKind::MecCollapse,
        Some(format!(
            "{} end components collapsed",
            d.mecs.len().max(collapsed)
        )),
    )
}

/// Clones the recipe graph below `root`, adding `cont` as continuations for
/// landings the graph does not already handle. Returns the new root id.
///
/// When `slot` is given, the cloned root is written into that pre-allocated node.
pub(crate) fn compose(
    nodes: &mut Vec<Recipe>,
    root: usize,
    cont: &[(usize, usize)],
    slot: Option<usize>,
) -> usize {
    let mut order = vec![root];
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let first = match slot {
        Some(s) => s,
        None => {
            nodes.push(nodes[root].clone());
            nodes.len() - 1
        }
    };
    ids.insert(root, first);
    let mut i = 0;
    while i < order.len() {
        let then = nodes[order[i]].then.clone();
        for (_, nid) in then {
            if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(nid) {
                nodes.push(nodes[nid].clone());
                e.insert(nodes.len() - 1);
                order.push(nid);
            }
        }
        i += 1;
    }
    for &old in &order {
        let src = nodes[old].clone();
        let mut then: BTreeMap<usize, usize> =
            src.then.iter().map(|&(g, nid)| (g, ids[&nid])).collect();
        for &(g, target) in cont {
            then.entry(g).or_insert(target);
        }
        nodes[ids[&old]] = Recipe {
            state: src.state,
            action: src.action,
            then: then.into_iter().collect(),
        };
    }
    first
}

/// Replaces all transitions entering `f.states` by macro-actions, one per internal strategy.
pub fn fragment_quotient(q: &Quotient, f: &Fragment) -> Result<Quotient, FragmentError> {
    let plan = fragment::plan(q, f)?;
    let g = q.model();
    let mut nodes = q.nodes().to_vec();
    let in_r: Vec<bool> = {
        let mut v = vec![false; g.num_states()];
        for &r in &f.states {
            v[r] = true;
        }
        v
    };
    let ground_of = |x: usize| match q.origin(x) {
        StateOrigin::Ground(gs) => *gs,
        _ => unreachable!("fragment states are ground states"),
    };
    // Internal nodes per distinct strategy, shared between entering actions.
    let mut strategy_nodes: BTreeMap<Strategy, Vec<(usize, usize)>> = BTreeMap::new();
    let mut draft = q.draft();
    for (t, j, strategies) in &plan.entering {
        let action = draft[*t].actions[*j].clone();
        let mut replacements = Vec::new();
        for strat in strategies {
            let cont = match strategy_nodes.get(&strat.choices) {
                Some(c) => c.clone(),
                None => {
                    let mut cont = Vec::new();
                    for &(r, _) in &strat.choices {
                        nodes.push(Recipe {
                            state: usize::MAX,
                            action: usize::MAX,
                            then: Vec::new(),
                        });
                        cont.push((ground_of(r), nodes.len() - 1));
                    }
                    cont.sort_unstable();
                    for &(r, c) in &strat.choices {
                        let slot = cont[cont
                            .binary_search_by_key(&ground_of(r), |&(gs, _)| gs)
                            .expect("slot allocated")]
                        .1;
                        compose(&mut nodes, q.root(r, c), &cont, Some(slot));
                    }
                    strategy_nodes.insert(strat.choices.clone(), cont.clone());
                    cont
                }
            };
            let root = compose(&mut nodes, action.root, &cont, None);
            let mut succ: BTreeSet<usize> = action
                .successors
                .iter()
                .copied()
                .filter(|&y| !in_r[y])
                .collect();
            succ.extend(strat.exits.iter().copied());
            if q.origin(*t).is_mec() {
                succ.remove(t);
            }
            if succ.is_empty() {
                continue;
            }
            let label = if strat.choices.len() == 1 && f.states.len() == 1 {
                let (r, c) = strat.choices[0];
                format!("{}>{}", action.label, g.actions(r)[c].label)
            } else {
                let desc: Vec<String> = strat
                    .choices
                    .iter()
                    .filter(|&&(r, _)| g.actions(r).len() > 1)
                    .map(|&(r, c)| format!("{}:{}", g.name(r), g.actions(r)[c].label))
                    .collect();
                format!("{}[{}]", action.label, desc.join(","))
            };
            replacements.push(DraftAction {
                label,
                root,
                successors: succ.into_iter().collect(),
            });
        }
        draft[*t].actions[*j].root = usize::MAX;
        draft[*t].actions.extend(replacements);
    }
    for st in &mut draft {
        st.actions.retain(|a| a.root != usize::MAX);
    }
    // Drop the fragment states themselves.
    let mut renum = vec![usize::MAX; draft.len()];
    let mut kept = Vec::new();
    for (x, st) in draft.into_iter().enumerate() {
        if !in_r[x] {
            renum[x] = kept.len();
            kept.push(st);
        }
    }
    for st in &mut kept {
        for a in &mut st.actions {
            a.successors = a.successors.iter().map(|&y| renum[y]).collect();
            debug_assert!(a.successors.iter().all(|&y| y != usize::MAX));
        }
    }
    let names: Vec<&str> = f.states.iter().map(|&r| g.name(r)).collect();
    let kind = if f.states.len() == 1 {
        TransformKind::Chain
    } else {
        TransformKind::SccFragment
    };
    Ok(q.finish(
        kept,
        renum[g.initial()],
        nodes,
        kind,
        Some(format!("eliminated {{{}}}", names.join(","))),
    ))
}

/// Quotients beneficial SCC fragments until none is left.
pub fn quotient_scc_fragments(q: &Quotient, small_support: bool) -> Quotient {
    let mut q = q.clone();
    'outer: loop {
        for f in fragment::quotient_scc_candidates(&q) {
            if let Ok((before, after)) = fragment::learnable_costs(&q, &f, small_support) {
                if after < before {
                    if let Ok(next) = fragment_quotient(&q, &f) {
                        q = next;
                        continue 'outer;
                    }
                }
            }
        }
        return q;
    }
}

/// Eliminates chain states until none is left whose elimination does not hurt.
pub fn eliminate_chains(q: &Quotient, small_support: bool) -> Quotient {
    let mut q = q.clone();
    let mut eliminated = 0usize;
    let start_transforms = q.transforms().len();
    'outer: loop {
        for f in fragment::quotient_chain_candidates(&q) {
            if let Ok((before, after)) = fragment::learnable_costs(&q, &f, small_support) {
                if after <= before {
                    if let Ok(next) = fragment_quotient(&q, &f) {
                        q = next;
                        eliminated += 1;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    // Fold the individual chain steps into one report entry.
    if eliminated > 0 {
        let steps: Vec<TransformReport> = q.map.transforms.drain(start_transforms..).collect();
        q.map.transforms.push(TransformReport {
            kind: TransformKind::Chain,
            states_before: steps[0].states_before,
            states_after: steps[steps.len() - 1].states_after,
            transitions_before: steps[0].transitions_before,
            transitions_after: steps[steps.len() - 1].transitions_after,
            detail: Some(format!("{eliminated} chain states eliminated")),
        });
    }
    q
}
