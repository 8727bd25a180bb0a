//! Exact maximal reachability on fully known models (the ground-truth oracle).

use crate::graph::{mec_decomposition_within, value0_states};
use crate::linalg;
use crate::model::{support_view, Mdp};

/// Policy iteration is skipped above this many collapsed states (dense solves).
const MAX_DENSE: usize = 3000;

enum Succ {
    Node(usize),
    Value(f64),
}

/// Transient successors and the constant reward of reaching the target.
type CollapsedAction = (Vec<(usize, f64)>, f64);

/// Maximal probability of reaching the target from every state.
///
/// End components are collapsed first, value iteration runs until the update
/// drops below `tol / 2`, and the greedy policy is then polished by policy
/// iteration with exact linear solves.
pub fn exact_reachability_value(m: &Mdp, tol: f64) -> Vec<f64> {
    let g = support_view(m);
    let n = m.num_states();
    let v0 = value0_states(&g);
    let unknown: Vec<bool> = (0..n).map(|s| !m.is_target(s) && !v0[s]).collect();
    let mecs = mec_decomposition_within(&g, &unknown);

    let mut node_of = vec![usize::MAX; n];
    let mut nodes = 0;
    for s in 0..n {
        if !unknown[s] {
            continue;
        }
        match mecs.state_mec[s] {
            Some(k) => {
                let first = mecs.mecs[k].states[0];
                if first == s {
                    node_of[s] = nodes;
                    nodes += 1;
                } else {
                    node_of[s] = node_of[first];
                }
            }
            None => {
                node_of[s] = nodes;
                nodes += 1;
            }
        }
    }
    let target = |t: usize| {
        if m.is_target(t) {
            Succ::Value(1.0)
        } else if v0[t] {
            Succ::Value(0.0)
        } else {
            Succ::Node(node_of[t])
        }
    };

    // Collapsed actions: transient moves and the constant reward of reaching the target.
    let mut actions: Vec<Vec<CollapsedAction>> = vec![Vec::new(); nodes];
    for s in 0..n {
        if !unknown[s] {
            continue;
        }
        let x = node_of[s];
        let mec = mecs.state_mec[s].map(|k| &mecs.mecs[k]);
        for (a, act) in m.actions(s).iter().enumerate() {
            if mec.is_some_and(|k| k.retains(s, a)) {
                continue;
            }
            let mut moves = Vec::new();
            let mut reward = 0.0;
            let mut stay = 0.0;
            for &(t, p) in &act.successors {
                match target(t) {
                    Succ::Value(v) => reward += p * v,
                    Succ::Node(y) if mec.is_some() && y == x => stay += p,
                    Succ::Node(y) => moves.push((y, p)),
                }
            }
            let scale = 1.0 / (1.0 - stay);
            for mv in &mut moves {
                mv.1 *= scale;
            }
            actions[x].push((moves, reward * scale));
        }
    }

    let q_value = |v: &[f64], act: &(Vec<(usize, f64)>, f64)| {
        act.0.iter().map(|&(y, p)| p * v[y]).sum::<f64>() + act.1
    };
    let mut v = vec![0.0; nodes];
    for _ in 0..100_000 {
        let mut delta: f64 = 0.0;
        for x in 0..nodes {
            let best = actions[x]
                .iter()
                .map(|a| q_value(&v, a))
                .fold(0.0, f64::max);
            delta = delta.max((best - v[x]).abs());
            v[x] = best;
        }
        if delta < tol / 2.0 {
            break;
        }
    }

    if nodes > 0 && nodes <= MAX_DENSE {
        let mut policy: Vec<usize> = (0..nodes)
            .map(|x| argmax(actions[x].iter().map(|a| q_value(&v, a))))
            .collect();
        for _ in 0..1000 {
            let q: Vec<Vec<(usize, f64)>> = (0..nodes)
                .map(|x| {
                    actions[x]
                        .get(policy[x])
                        .map_or(Vec::new(), |a| a.0.clone())
                })
                .collect();
            let b: Vec<f64> = (0..nodes)
                .map(|x| actions[x].get(policy[x]).map_or(0.0, |a| a.1))
                .collect();
            let Some(sol) = linalg::solve_transient(&q, &b) else {
                break;
            };
            let mut changed = false;
            for x in 0..nodes {
                let current = actions[x].get(policy[x]).map_or(0.0, |a| q_value(&sol, a));
                for (i, a) in actions[x].iter().enumerate() {
                    if q_value(&sol, a) > current + 1e-13 {
                        policy[x] = i;
                        changed = true;
                        break;
                    }
                }
            }
            v = sol.into_iter().map(|x| x.clamp(0.0, 1.0)).collect();
            if !changed {
                break;
            }
        }
    }

    (0..n)
        .map(|s| match target(s) {
            Succ::Value(x) => x,
            Succ::Node(y) => v[y],
        })
        .collect()
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    #[test]
    fn three_state_chain() {
        let m = parse_model(
            r#"{"states":["s","goal","sink"],"initial":"s","target":["goal"],
               "actions":{"s":{"a":{"goal":0.5,"sink":0.5}},"goal":{"l":{"goal":1}},"sink":{"l":{"sink":1}}}}"#,
        )
        .unwrap();
        let v = exact_reachability_value(&m, 1e-12);
        assert_eq!(v, vec![0.5, 1.0, 0.0]);
    }

    #[test]
    fn end_component_with_choice() {
        // Two states looping, each with an exit action of different quality.
        let m = parse_model(
            r#"{"states":["a","b","goal","sink"],"initial":"a","target":["goal"],
               "actions":{
                 "a":{"go":{"b":1},"exit":{"goal":0.2,"sink":0.8}},
                 "b":{"go":{"a":1},"exit":{"goal":0.7,"sink":0.3}},
                 "goal":{"l":{"goal":1}},"sink":{"l":{"sink":1}}}}"#,
        )
        .unwrap();
        let v = exact_reachability_value(&m, 1e-12);
        assert!((v[0] - 0.7).abs() < 1e-12);
        assert!((v[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn more_mass_towards_target_never_hurts() {
        let make = |p: f64| {
            parse_model(&format!(
                r#"{{"states":["s","m","goal","sink"],"initial":"s","target":["goal"],
                   "actions":{{"s":{{"a":{{"m":0.5,"goal":{p},"sink":{q}}}}},
                   "m":{{"a":{{"s":0.5,"sink":0.5}}}},
                   "goal":{{"l":{{"goal":1}}}},"sink":{{"l":{{"sink":1}}}}}}}}"#,
                q = 0.5 - p
            ))
            .unwrap()
        };
        let lo = exact_reachability_value(&make(0.1), 1e-12)[0];
        let hi = exact_reachability_value(&make(0.2), 1e-12)[0];
        assert!(hi > lo);
        assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        // s = 0.5 m + p, m = 0.5 s  =>  s = p / 0.75
        assert!((lo - 0.1 / 0.75).abs() < 1e-12);
    }
}
