//! MDP data model, the JSON model format and the support-only view.
//!
//! A model document looks like
//!
//! ```json
//! {
//!   "states": ["init", "goal", "sink"],
//!   "initial": "init",
//!   "target": ["goal"],
//!   "actions": {
//!     "init": { "go": { "goal": 0.5, "sink": 0.5 } },
//!     "goal": { "stay": { "goal": 1 } },
//!     "sink": { "stay": { "sink": 1 } }
//!   }
//! }
//! ```
//!
//! States, actions and successors keep document order.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for a distribution to count as summing to one.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("model has no states")]
    NoStates,
    #[error("state `{0}` is declared twice")]
    DuplicateState(String),
    #[error("{context} refers to unknown state `{name}`")]
    UnknownState { context: String, name: String },
    #[error("state `{0}` has no actions")]
    EmptyActions(String),
    #[error("distribution {state}/{action} is empty")]
    EmptyDistribution { state: String, action: String },
    #[error(
        "distribution {state}/{action}: probability of `{successor}` is {value}, must lie in (0,1]"
    )]
    BadProbability {
        state: String,
        action: String,
        successor: String,
        value: f64,
    },
    #[error("distribution {state}/{action} sums to {sum}")]
    BadSum {
        state: String,
        action: String,
        sum: f64,
    },
}

/// One action of a ground-truth state.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub name: String,
    /// Successor state ids with their probabilities, in document order.
    pub successors: Vec<(usize, f64)>,
}

impl Action {
    pub fn probability(&self, succ: usize) -> f64 {
        self.successors
            .iter()
            .filter(|(s, _)| *s == succ)
            .map(|(_, p)| p)
            .sum()
    }
}

/// A fully specified Markov decision process (the ground truth).
#[derive(Debug, Clone, PartialEq)]
pub struct Mdp {
    names: Vec<String>,
    index: HashMap<String, usize>,
    initial: usize,
    target: Vec<bool>,
    actions: Vec<Vec<Action>>,
}

impl Mdp {
    /// Builds and validates a model from already-indexed parts.
    pub fn new(
        names: Vec<String>,
        initial: usize,
        target: Vec<usize>,
        actions: Vec<Vec<Action>>,
    ) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::NoStates);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateState(name.clone()));
            }
        }
        let n = names.len();
        let unknown = |context: &str, id: usize| ModelError::UnknownState {
            context: context.to_string(),
            name: format!("#{id}"),
        };
        if initial >= n {
            return Err(unknown("initial", initial));
        }
        let mut target_flags = vec![false; n];
        for t in target {
            if t >= n {
                return Err(unknown("target", t));
            }
            target_flags[t] = true;
        }
        if actions.len() != n {
            return Err(ModelError::EmptyActions(
                names.get(actions.len()).cloned().unwrap_or_default(),
            ));
        }
        let mdp = Mdp {
            names,
            index,
            initial,
            target: target_flags,
            actions,
        };
        mdp.validate()?;
        Ok(mdp)
    }

    fn validate(&self) -> Result<(), ModelError> {
        for (s, acts) in self.actions.iter().enumerate() {
            let state = &self.names[s];
            if acts.is_empty() {
                return Err(ModelError::EmptyActions(state.clone()));
            }
            for a in acts {
                if a.successors.is_empty() {
                    return Err(ModelError::EmptyDistribution {
                        state: state.clone(),
                        action: a.name.clone(),
                    });
                }
                let mut sum = 0.0;
                for &(t, p) in &a.successors {
                    let successor =
                        self.names
                            .get(t)
                            .cloned()
                            .ok_or_else(|| ModelError::UnknownState {
                                context: format!("distribution {state}/{}", a.name),
                                name: format!("#{t}"),
                            })?;
                    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
                        return Err(ModelError::BadProbability {
                            state: state.clone(),
                            action: a.name.clone(),
                            successor,
                            value: p,
                        });
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    return Err(ModelError::BadSum {
                        state: state.clone(),
                        action: a.name.clone(),
                        sum,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_target(&self, s: usize) -> bool {
        self.target[s]
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&s| self.target[s])
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn actions(&self, s: usize) -> &[Action] {
        &self.actions[s]
    }

    /// A state is absorbing when every action loops back to it with certainty.
    pub fn is_absorbing(&self, s: usize) -> bool {
        self.actions[s]
            .iter()
            .all(|a| a.successors.iter().all(|&(t, _)| t == s))
    }

    /// Number of transitions `(s, a, s')` leaving non-absorbing states.
    pub fn transition_count(&self) -> usize {
        (0..self.num_states())
            .filter(|&s| !self.is_absorbing(s))
            .map(|s| {
                self.actions[s]
                    .iter()
                    .map(|a| a.successors.len())
                    .sum::<usize>()
            })
            .sum()
    }

    /// Number of transitions whose probability is not already forced to one.
    pub fn nontrivial_transition_count(&self) -> usize {
        (0..self.num_states())
            .filter(|&s| !self.is_absorbing(s))
            .flat_map(|s| self.actions[s].iter())
            .filter(|a| a.successors.len() > 1)
            .map(|a| a.successors.len())
            .sum()
    }

    pub fn to_document(&self) -> ModelDocument {
        let mut actions = IndexMap::new();
        for (s, acts) in self.actions.iter().enumerate() {
            let mut per_state = IndexMap::new();
            for a in acts {
                let dist: IndexMap<String, f64> = a
                    .successors
                    .iter()
                    .map(|&(t, p)| (self.names[t].clone(), p))
                    .collect();
                per_state.insert(a.name.clone(), dist);
            }
            actions.insert(self.names[s].clone(), per_state);
        }
        ModelDocument {
            states: self.names.clone(),
            initial: self.names[self.initial].clone(),
            target: self.targets().map(|t| self.names[t].clone()).collect(),
            actions,
        }
    }
}

/// Serialized form of an [`Mdp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub states: Vec<String>,
    pub initial: String,
    pub target: Vec<String>,
    pub actions: IndexMap<String, IndexMap<String, IndexMap<String, f64>>>,
}

impl ModelDocument {
    pub fn into_mdp(self) -> Result<Mdp, ModelError> {
        let mut index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let lookup = |context: String, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownState {
                    context,
                    name: name.to_string(),
                })
        };
        let initial = lookup("initial".into(), &self.initial)?;
        let target = self
            .target
            .iter()
            .map(|t| lookup("target".into(), t))
            .collect::<Result<Vec<_>, _>>()?;
        let mut actions: Vec<Vec<Action>> = vec![Vec::new(); self.states.len()];
        for (state, acts) in &self.actions {
            let s = lookup("actions".into(), state)?;
            for (action, dist) in acts {
                let mut successors = Vec::with_capacity(dist.len());
                for (succ, &p) in dist {
                    let t = lookup(format!("distribution {state}/{action}"), succ)?;
                    successors.push((t, p));
                }
                actions[s].push(Action {
                    name: action.clone(),
                    successors,
                });
            }
        }
        Mdp::new(self.states, initial, target, actions)
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<Mdp, ModelError> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_mdp()
}

/// Serializes a model to its (pretty-printed) document form.
pub fn serialize_model(m: &Mdp) -> String {
    serde_json::to_string_pretty(&m.to_document()).expect("model documents always serialize")
}

/// An action of a support-only model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportAction {
    pub label: String,
    /// Sorted, duplicate-free successor ids.
    pub successors: Vec<usize>,
}

/// An MDP in which only the supports of the distributions are known.
///
/// States without actions are terminal: they have value one when they are
/// targets and zero otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMdp {
    names: Vec<String>,
    initial: usize,
    target: Vec<bool>,
    actions: Vec<Vec<SupportAction>>,
}

impl SupportMdp {
    /// Builds a support model; successor lists are sorted and deduplicated.
    pub fn new(
        names: Vec<String>,
        initial: usize,
        target: Vec<bool>,
        mut actions: Vec<Vec<SupportAction>>,
    ) -> Self {
        assert_eq!(names.len(), target.len());
        assert_eq!(names.len(), actions.len());
        assert!(initial < names.len());
        for a in actions.iter_mut().flatten() {
            a.successors.sort_unstable();
            a.successors.dedup();
            debug_assert!(a.successors.iter().all(|&t| t < names.len()));
        }
        SupportMdp {
            names,
            initial,
            target,
            actions,
        }
    }

    /// Convenience constructor from edge lists; states are named `s0`, `s1`, ...
    pub fn from_edges(initial: usize, targets: &[usize], actions: Vec<Vec<Vec<usize>>>) -> Self {
        let n = actions.len();
        let mut target = vec![false; n];
        for &t in targets {
            target[t] = true;
        }
        let actions = actions
            .into_iter()
            .map(|acts| {
                acts.into_iter()
                    .enumerate()
                    .map(|(i, successors)| SupportAction {
                        label: format!("a{i}"),
                        successors,
                    })
                    .collect()
            })
            .collect();
        SupportMdp::new(
            (0..n).map(|i| format!("s{i}")).collect(),
            initial,
            target,
            actions,
        )
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_target(&self, s: usize) -> bool {
        self.target[s]
    }

    pub fn target_flags(&self) -> &[bool] {
        &self.target
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn actions(&self, s: usize) -> &[SupportAction] {
        &self.actions[s]
    }

    pub fn successors(&self, s: usize, a: usize) -> &[usize] {
        &self.actions[s][a].successors
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.actions[s].is_empty()
    }

    /// All `(s, a, s')` triples.
    pub fn transition_count(&self) -> usize {
        self.actions
            .iter()
            .flatten()
            .map(|a| a.successors.len())
            .sum()
    }

    pub fn action_count(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    /// Distinct successor states of `s` over all actions.
    pub fn post(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.actions[s]
            .iter()
            .flat_map(|a| a.successors.iter().copied())
    }

    /// Predecessor lists `(t, a)` for every state.
    pub fn predecessors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut pre = vec![Vec::new(); self.num_states()];
        for (s, acts) in self.actions.iter().enumerate() {
            for (a, act) in acts.iter().enumerate() {
                for &t in &act.successors {
                    pre[t].push((s, a));
                }
            }
        }
        pre
    }
}

impl fmt::Display for SupportMdp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..self.num_states() {
            write!(f, "{}", self.names[s])?;
            if s == self.initial {
                write!(f, " (initial)")?;
            }
            if self.target[s] {
                write!(f, " (target)")?;
            }
            writeln!(f)?;
            for a in &self.actions[s] {
                let succ: Vec<&str> = a.successors.iter().map(|&t| self.name(t)).collect();
                writeln!(f, "  {} -> {{{}}}", a.label, succ.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Erases the probabilities of a model, keeping supports and document order.
pub fn support_view(m: &Mdp) -> SupportMdp {
    let actions = (0..m.num_states())
        .map(|s| {
            m.actions(s)
                .iter()
                .map(|a| SupportAction {
                    label: a.name.clone(),
                    successors: a.successors.iter().map(|&(t, _)| t).collect(),
                })
                .collect()
        })
        .collect();
    SupportMdp::new(
        m.names().to_vec(),
        m.initial(),
        (0..m.num_states()).map(|s| m.is_target(s)).collect(),
        actions,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const COIN: &str = r#"{
        "states": ["s", "goal", "sink"],
        "initial": "s",
        "target": ["goal"],
        "actions": {
            "s": {"flip": {"goal": 0.3, "sink": 0.7}},
            "goal": {"stay": {"goal": 1}},
            "sink": {"stay": {"sink": 1.0}}
        }
    }"#;

    #[test]
    fn parses_single_state_self_loop() {
        let m = parse_model(
            r#"{"states":["a"],"initial":"a","target":[],"actions":{"a":{"x":{"a":1}}}}"#,
        )
        .unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.actions(0).len(), 1);
        assert!(m.is_absorbing(0));
    }

    #[test]
    fn reports_bad_sum() {
        let err = parse_model(
            r#"{"states":["a","s1","s2"],"initial":"a","target":[],
               "actions":{"a":{"x":{"s1":0.5,"s2":0.49}},"s1":{"x":{"s1":1}},"s2":{"x":{"s2":1}}}}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sums to 0.99"), "{msg}");
        assert!(msg.contains("a/x"), "{msg}");
    }

    #[test]
    fn reports_nonpositive_probability() {
        let err = parse_model(
            r#"{"states":["a","b"],"initial":"a","target":[],
               "actions":{"a":{"x":{"a":1.0,"b":0}},"b":{"x":{"b":1}}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::BadProbability { .. }));
    }

    #[test]
    fn reports_dangling_successor() {
        let err = parse_model(
            r#"{"states":["a"],"initial":"a","target":[],"actions":{"a":{"x":{"zz":1}}}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("zz"));
    }

    #[test]
    fn reports_missing_actions() {
        let err = parse_model(
            r#"{"states":["a","b"],"initial":"a","target":[],"actions":{"a":{"x":{"b":1}}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::EmptyActions(ref s) if s == "b"));
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_model("{\n  \"states\": [,]\n}").unwrap_err();
        match err {
            ModelError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn round_trips() {
        let m = parse_model(COIN).unwrap();
        let again = parse_model(&serialize_model(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn support_view_erases_probabilities() {
        let m = parse_model(COIN).unwrap();
        let g = support_view(&m);
        assert_eq!(g.successors(0, 0), &[1, 2]);
        assert_eq!(g.successors(1, 0), &[1]);
        assert_eq!(g.transition_count(), 4);
        assert_eq!(m.transition_count(), 2);
    }
}
