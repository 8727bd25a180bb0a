//! Path sampling on the ground-truth model and the count statistics it produces.
//!
//! Paths follow the uniform scheduler. In grey mode every ground step is replayed
//! through the recipes of a [`Quotient`], so each transformed action yields exactly
//! one observation per execution. In black mode counts are kept per ground action
//! and successors are discovered as they are observed.

use std::borrow::Cow;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binomial::{CiError, CiMethod, SampleCounts};
use crate::graph::Quotient;
use crate::model::{Mdp, SupportMdp};

/// Default cap on ground steps per path.
pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

/// Visit count and per-successor counts of one action.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ActionCounts {
    pub n: u64,
    /// Sorted by successor id.
    pub successors: Vec<(usize, u64)>,
}

impl ActionCounts {
    pub fn k(&self, successor: usize) -> u64 {
        self.successors
            .binary_search_by_key(&successor, |&(t, _)| t)
            .map_or(0, |i| self.successors[i].1)
    }

    fn add(&mut self, successor: usize, count: u64) {
        self.n += count;
        match self
            .successors
            .binary_search_by_key(&successor, |&(t, _)| t)
        {
            Ok(i) => self.successors[i].1 += count,
            Err(i) => self.successors.insert(i, (successor, count)),
        }
    }
}

/// Sufficient statistics of all sampled paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountsTable {
    paths: u64,
    capped: u64,
    table: Vec<Vec<ActionCounts>>,
}

impl CountsTable {
    /// Zero counts for every transition of a support model.
    pub fn for_model(g: &SupportMdp) -> Self {
        let table = (0..g.num_states())
            .map(|s| {
                g.actions(s)
                    .iter()
                    .map(|a| ActionCounts {
                        n: 0,
                        successors: a.successors.iter().map(|&t| (t, 0)).collect(),
                    })
                    .collect()
            })
            .collect();
        CountsTable {
            paths: 0,
            capped: 0,
            table,
        }
    }

    /// Zero counts without known successors; `actions[s]` is the action count of `s`.
    pub fn with_shape(actions: &[usize]) -> Self {
        CountsTable {
            paths: 0,
            capped: 0,
            table: actions
                .iter()
                .map(|&k| vec![ActionCounts::default(); k])
                .collect(),
        }
    }

    pub fn paths(&self) -> u64 {
        self.paths
    }

    pub fn capped(&self) -> u64 {
        self.capped
    }

    pub fn get(&self, s: usize, a: usize) -> &ActionCounts {
        &self.table[s][a]
    }

    pub fn record(&mut self, s: usize, a: usize, t: usize) {
        self.table[s][a].add(t, 1);
    }

    /// Adds a finished path and its observations.
    pub fn absorb(&mut self, path: &PathSummary) {
        self.paths += 1;
        if path.outcome == PathOutcome::Capped {
            self.capped += 1;
        }
        for &(s, a, t) in &path.observations {
            self.record(s, a, t);
        }
    }

    /// Pointwise sum with a table of the same shape.
    pub fn merge(&mut self, other: &CountsTable) {
        assert_eq!(
            self.table.len(),
            other.table.len(),
            "tables of different models"
        );
        self.paths += other.paths;
        self.capped += other.capped;
        for (mine, theirs) in self.table.iter_mut().zip(&other.table) {
            for (m, t) in mine.iter_mut().zip(theirs) {
                for &(succ, k) in &t.successors {
                    m.add(succ, k);
                }
            }
        }
    }

    /// Whether every action's successor counts add up to its visit count.
    pub fn is_consistent(&self) -> bool {
        self.table
            .iter()
            .flatten()
            .all(|c| c.successors.iter().map(|s| s.1).sum::<u64>() == c.n)
    }

    /// CSV dump `state,action,successor,n,k` using the names of `g`.
    pub fn to_csv(&self, g: &SupportMdp) -> String {
        let mut out = String::from("state,action,successor,n,k\n");
        for (s, acts) in self.table.iter().enumerate() {
            for (a, c) in acts.iter().enumerate() {
                for &(t, k) in &c.successors {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        csv_field(g.name(s)),
                        csv_field(&g.actions(s)[a].label),
                        csv_field(g.name(t)),
                        c.n,
                        k
                    );
                }
            }
        }
        out
    }
}

/// Quotes a CSV field that contains a separator, quote or line break.
fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    Grey,
    Black,
}

impl std::str::FromStr for SamplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grey" | "gray" => Ok(SamplingMode::Grey),
            "black" => Ok(SamplingMode::Black),
            other => Err(format!("unknown mode `{other}` (expected grey or black)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub step_cap: u64,
    pub mode: SamplingMode,
    /// Lower bound on every positive transition probability (black mode).
    pub p_min: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            step_cap: DEFAULT_STEP_CAP,
            mode: SamplingMode::Grey,
            p_min: 0.01,
        }
    }
}

/// Generator of path `index`: ChaCha8 seeded with `seed`, on stream `index`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathOutcome {
    Goal,
    Sink,
    Capped,
}

/// One sampled path: its fate, length and observations `(state, action, successor)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSummary {
    pub outcome: PathOutcome,
    pub steps: u64,
    pub observations: Vec<(usize, usize, usize)>,
}

fn ground_step<R: Rng>(m: &Mdp, s: usize, a: usize, rng: &mut R) -> usize {
    let succ = &m.actions(s)[a].successors;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(t, p) in succ {
        acc += p;
        if u < acc {
            return t;
        }
    }
    succ[succ.len() - 1].0
}

/// Uniform choice among the macro actions that share an entry.
pub fn macro_strategy_choice<R: Rng>(candidates: usize, rng: &mut R) -> usize {
    assert!(candidates > 0);
    if candidates == 1 {
        0
    } else {
        rng.random_range(0..candidates)
    }
}

/// Samples one path of `m` and translates it into observations of the quotient `q`.
///
/// At a collapsed end component a ground action of the current ground state is
/// drawn; internal actions move inside the component without an observation, and
/// landings back in the component are discarded. Elsewhere a transformed action is
/// drawn uniformly and its recipe is executed to completion.
pub fn sample_path<R: Rng>(m: &Mdp, q: &Quotient, step_cap: u64, rng: &mut R) -> PathSummary {
    let g = q.model();
    let mut ground = m.initial();
    let mut x = q.class_of(ground).expect("the initial state is live");
    let mut steps = 0;
    let mut observations = Vec::new();
    loop {
        if g.is_terminal(x) {
            let outcome = if g.is_target(x) {
                PathOutcome::Goal
            } else {
                PathOutcome::Sink
            };
            return PathSummary {
                outcome,
                steps,
                observations,
            };
        }
        if steps >= step_cap {
            break;
        }
        let mec = q.origin(x).is_mec();
        let chosen = if mec {
            let a = rng.random_range(0..m.actions(ground).len());
            let candidates: Vec<usize> = (0..g.actions(x).len())
                .filter(|&j| q.ground_action(x, j) == (ground, a))
                .collect();
            if candidates.is_empty() {
                ground = ground_step(m, ground, a, rng);
                steps += 1;
                continue;
            }
            candidates[macro_strategy_choice(candidates.len(), rng)]
        } else {
            rng.random_range(0..g.actions(x).len())
        };
        let mut node = q.node(q.root(x, chosen));
        let landed = loop {
            let t = ground_step(m, node.state, node.action, rng);
            steps += 1;
            match node.next(t) {
                Some(id) if steps < step_cap => node = q.node(id),
                Some(_) => break None,
                None => break Some(t),
            }
        };
        let Some(t) = landed else {
            break;
        };
        ground = t;
        let y = q.class_of(t).expect("recipes land in live states");
        if !(mec && y == x) {
            observations.push((x, chosen, y));
        }
        x = y;
    }
    PathSummary {
        outcome: PathOutcome::Capped,
        steps,
        observations,
    }
}

/// Samples one path of `m` with per-ground-action observations (black mode).
///
/// The path stops at targets, at states `absorbing` declares absorbing, and after
/// `run_limit` consecutive self-loops of the same state.
pub fn sample_black_path<R: Rng>(
    m: &Mdp,
    step_cap: u64,
    absorbing: &dyn Fn(usize) -> bool,
    run_limit: u64,
    rng: &mut R,
) -> PathSummary {
    let mut s = m.initial();
    let mut steps = 0;
    let mut run = 0;
    let mut observations = Vec::new();
    loop {
        if m.is_target(s) {
            return PathSummary {
                outcome: PathOutcome::Goal,
                steps,
                observations,
            };
        }
        if absorbing(s) || run >= run_limit {
            return PathSummary {
                outcome: PathOutcome::Sink,
                steps,
                observations,
            };
        }
        if steps >= step_cap {
            return PathSummary {
                outcome: PathOutcome::Capped,
                steps,
                observations,
            };
        }
        let a = rng.random_range(0..m.actions(s).len());
        let t = ground_step(m, s, a, rng);
        steps += 1;
        observations.push((s, a, t));
        run = if t == s { run + 1 } else { 0 };
        s = t;
    }
}

/// The black-box completeness rule: the observed successors are all there is once
/// their lower confidence bounds leave less than `p_min` for anything unseen.
pub fn support_complete(lower_bounds: &[f64], p_min: f64) -> bool {
    !lower_bounds.is_empty() && lower_bounds.iter().sum::<f64>() > 1.0 - p_min
}

/// Completeness of every action in a black-mode table; `delta_t(s, a)` is the
/// transition budget of the action.
pub fn blackbox_support_update(
    counts: &CountsTable,
    method: CiMethod,
    delta_t: impl Fn(usize, usize) -> f64,
    p_min: f64,
) -> Result<Vec<Vec<bool>>, CiError> {
    counts
        .table
        .iter()
        .enumerate()
        .map(|(s, acts)| {
            acts.iter()
                .enumerate()
                .map(|(a, c)| {
                    if c.n == 0 {
                        return Ok(false);
                    }
                    let lows = c
                        .successors
                        .iter()
                        .map(|&(_, k)| {
                            Ok(method
                                .interval(SampleCounts { n: c.n, k }, delta_t(s, a))?
                                .lo)
                        })
                        .collect::<Result<Vec<f64>, CiError>>()?;
                    Ok(support_complete(&lows, p_min))
                })
                .collect()
        })
        .collect()
}
