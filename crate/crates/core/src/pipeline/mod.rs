//! The sample-estimate-solve loop and the experiments built on it.

mod estimate;
mod experiments;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binomial::{CiError, CiMethod};
use crate::budget::{allocate, enumerate_tasks, independence_share, AllocationMode};
use crate::graph::{Quotient, TransformConfig, TransformReport};
use crate::model::{support_view, Mdp};
use crate::sampler::{
    blackbox_support_update, path_rng, sample_black_path, sample_path, CountsTable, PathSummary,
    SamplingMode, DEFAULT_STEP_CAP,
};
use crate::solver::{interval_iteration, SolverError, ValueBounds};

pub use estimate::{
    black_imdp, complement_pivot, grey_imdp, task_distribution, transition_interval,
};
pub use experiments::{
    coverage_experiment, emit_figures, run_ablation, AblationAxis, AblationCell, AblationReport,
    AxisSummary, CoverageReport, FigureSettings,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error(transparent)]
    Solver(SolverError),
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Model file or bundled model name; informational only.
    pub model: String,
    pub epsilon: f64,
    pub delta: f64,
    pub ci_method: CiMethod,
    pub small_support: bool,
    /// Multiplicative budget split over distributions instead of the union bound.
    pub independence: bool,
    pub equivalence: bool,
    pub chains: bool,
    pub scc_fragments: bool,
    pub batch_size: u64,
    pub max_batches: u64,
    /// Sample exactly this many paths and solve once.
    pub fixed_paths: Option<u64>,
    pub seed: u64,
    pub mode: SamplingMode,
    pub p_min: f64,
    pub step_cap: u64,
    /// Accept interval methods without a coverage guarantee.
    pub allow_unsound: bool,
    pub output: Option<PathBuf>,
    /// Write the final counts table as CSV to this file.
    pub counts: Option<PathBuf>,
    /// Record wall time (makes the result non-reproducible).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::full()
    }
}

impl RunConfig {
    /// Clopper-Pearson with every improvement enabled.
    pub fn full() -> Self {
        RunConfig {
            model: String::new(),
            epsilon: 0.01,
            delta: 0.1,
            ci_method: CiMethod::ClopperPearson,
            small_support: true,
            independence: true,
            equivalence: true,
            chains: true,
            scc_fragments: true,
            batch_size: 1000,
            max_batches: 1000,
            fixed_paths: None,
            seed: 0,
            mode: SamplingMode::Grey,
            p_min: 0.01,
            step_cap: DEFAULT_STEP_CAP,
            allow_unsound: false,
            output: None,
            counts: None,
            timing: false,
        }
    }

    /// Hoeffding with the union bound and no structural improvement.
    pub fn baseline() -> Self {
        RunConfig {
            ci_method: CiMethod::Hoeffding,
            small_support: false,
            independence: false,
            equivalence: false,
            chains: false,
            scc_fragments: false,
            ..RunConfig::full()
        }
    }

    pub fn budget_mode(&self) -> AllocationMode {
        if self.independence {
            AllocationMode::Independence
        } else {
            AllocationMode::Uniform
        }
    }

    pub fn transforms(&self) -> TransformConfig {
        TransformConfig {
            equivalence: self.equivalence,
            scc_fragments: self.scc_fragments,
            chains: self.chains,
            small_support: self.small_support,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |msg: String| Err(PipelineError::InvalidConfig(msg));
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return bad(format!("epsilon {} must lie in (0,1]", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta {} must lie in (0,1)", self.delta));
        }
        if self.batch_size == 0 || self.max_batches == 0 {
            return bad("batch size and batch count must be at least 1".into());
        }
        if self.fixed_paths == Some(0) {
            return bad("fixed path budget must be at least 1".into());
        }
        if self.step_cap == 0 {
            return bad("step cap must be at least 1".into());
        }
        if self.mode == SamplingMode::Black && !(self.p_min > 0.0 && self.p_min <= 1.0) {
            return bad(format!("p-min {} must lie in (0,1]", self.p_min));
        }
        if !self.ci_method.sound_for_smc() && !self.allow_unsound {
            return bad(format!(
                "{} is {}; pass allow-unsound to use it anyway",
                self.ci_method,
                self.ci_method.status()
            ));
        }
        Ok(())
    }
}

/// How the run decided to stop, with the statistical caveat that applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stopping {
    pub protocol: String,
    pub caveat: String,
}

impl Stopping {
    fn fixed() -> Self {
        Stopping {
            protocol: "fixed-paths".into(),
            caveat: "bounds hold with probability at least 1 - delta for the fixed path budget"
                .into(),
        }
    }

    fn adaptive() -> Self {
        Stopping {
            protocol: "adaptive".into(),
            caveat: "bounds are re-estimated after every batch; the confidence level holds for \
                     a fixed sample size and is not corrected for repeated looks"
                .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub model: String,
    pub lo: f64,
    pub hi: f64,
    pub converged: bool,
    /// Whole sampled paths, including capped ones.
    pub paths: u64,
    pub capped_paths: u64,
    pub batches: u64,
    pub states: usize,
    pub transitions: usize,
    pub estimated_transitions: usize,
    pub transforms: Vec<TransformReport>,
    pub seed: u64,
    pub stopping: Stopping,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunResult {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }
}

fn solve(imdp: &crate::solver::IntervalMdp, epsilon: f64) -> Result<ValueBounds, PipelineError> {
    match interval_iteration(imdp, epsilon / 10.0) {
        Ok(b) => Ok(b),
        Err(SolverError::IterationCap { partial, .. }) => Ok(*partial),
        Err(e) => Err(PipelineError::Solver(e)),
    }
}

/// Paths `start..start + size` sampled in parallel, returned in index order.
fn batch<F>(start: u64, size: u64, f: F) -> Vec<PathSummary>
where
    F: Fn(u64) -> PathSummary + Sync + Send,
{
    (start..start + size).into_par_iter().map(f).collect()
}

struct Schedule {
    fixed: Option<u64>,
    batch_size: u64,
    max_batches: u64,
}

impl Schedule {
    fn of(cfg: &RunConfig) -> Self {
        Schedule {
            fixed: cfg.fixed_paths,
            batch_size: cfg.batch_size,
            max_batches: cfg.max_batches,
        }
    }

    fn size(&self, done: u64) -> Option<u64> {
        match self.fixed {
            Some(n) => (done == 0).then_some(n),
            None => (done < self.max_batches).then_some(self.batch_size),
        }
    }

    fn stopping(&self) -> Stopping {
        if self.fixed.is_some() {
            Stopping::fixed()
        } else {
            Stopping::adaptive()
        }
    }
}

/// Runs statistical model checking of the maximal reachability value of `m`.
///
/// The sampler sees the ground truth; everything else only uses the support.
/// A result that did not reach width `epsilon` has `converged == false`.
pub fn run_smc(m: &Mdp, cfg: &RunConfig) -> Result<RunResult, PipelineError> {
    run_smc_with_counts(m, cfg).map(|(result, _)| result)
}

/// [`run_smc`] together with the final counts table as CSV
/// (`state,action,successor,n,k`, named after the sampled model).
pub fn run_smc_with_counts(m: &Mdp, cfg: &RunConfig) -> Result<(RunResult, String), PipelineError> {
    cfg.validate()?;
    let started = Instant::now();
    let (mut result, counts) = match cfg.mode {
        SamplingMode::Grey => run_grey(m, cfg)?,
        SamplingMode::Black => run_black(m, cfg)?,
    };
    if cfg.timing {
        result.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    Ok((result, counts))
}

fn run_grey(m: &Mdp, cfg: &RunConfig) -> Result<(RunResult, String), PipelineError> {
    let q = Quotient::build(&support_view(m), cfg.transforms());
    let g = q.model();
    let tasks = enumerate_tasks(g, cfg.small_support);
    let plan = allocate(cfg.budget_mode(), g, &tasks, cfg.delta);
    let schedule = Schedule::of(cfg);
    let mut result = RunResult {
        model: cfg.model.clone(),
        lo: 0.0,
        hi: 1.0,
        converged: false,
        paths: 0,
        capped_paths: 0,
        batches: 0,
        states: g.num_states(),
        transitions: g.transition_count(),
        estimated_transitions: plan.total_transitions(),
        transforms: q.transforms().to_vec(),
        seed: cfg.seed,
        stopping: schedule.stopping(),
        config: cfg.clone(),
        wall_time_ms: None,
    };
    let x0 = g.initial();
    if g.is_terminal(x0) {
        let v = if g.is_target(x0) { 1.0 } else { 0.0 };
        result.lo = v;
        result.hi = v;
        result.converged = true;
        return Ok((result, CountsTable::for_model(g).to_csv(g)));
    }
    let mut counts = CountsTable::for_model(g);
    while let Some(size) = schedule.size(result.batches) {
        let paths = batch(counts.paths(), size, |i| {
            sample_path(m, &q, cfg.step_cap, &mut path_rng(cfg.seed, i))
        });
        for p in &paths {
            counts.absorb(p);
        }
        result.batches += 1;
        let imdp = grey_imdp(&q, &tasks, &plan, &counts, cfg.ci_method)?;
        let b = solve(&imdp, cfg.epsilon)?;
        result.lo = b.lo[x0];
        result.hi = b.hi[x0];
        result.converged = result.width() <= cfg.epsilon;
        if result.converged {
            break;
        }
    }
    result.paths = counts.paths();
    result.capped_paths = counts.capped();
    Ok((result, counts.to_csv(g)))
}

/// Black mode: counts on the ground model with discovered supports.
///
/// Every non-target ground action is one distribution with at most `⌊1/p_min⌋`
/// successors, and the budget is split accordingly.
fn run_black(m: &Mdp, cfg: &RunConfig) -> Result<(RunResult, String), PipelineError> {
    let n = m.num_states();
    let ground = support_view(m);
    let distributions: usize = (0..n)
        .filter(|&s| !m.is_target(s))
        .map(|s| m.actions(s).len())
        .sum();
    let slots = (1.0 / cfg.p_min).floor().max(1.0);
    let d = distributions.max(1) as f64;
    let delta_t = match cfg.budget_mode() {
        AllocationMode::Uniform => cfg.delta / (d * slots),
        AllocationMode::Independence => independence_share(cfg.delta, 1.0 / d) / slots,
    };
    // Consecutive self-loops after which a path treats its state as absorbing.
    let max_actions = (0..n).map(|s| m.actions(s).len()).max().unwrap_or(1) as f64;
    let run_limit = ((delta_t / 2.0).ln() / (-cfg.p_min).ln_1p())
        .ceil()
        .max(1.0)
        * max_actions;
    let schedule = Schedule::of(cfg);
    let mut result = RunResult {
        model: cfg.model.clone(),
        lo: 0.0,
        hi: 1.0,
        converged: false,
        paths: 0,
        capped_paths: 0,
        batches: 0,
        states: n + 1,
        transitions: m.transition_count(),
        estimated_transitions: distributions * slots as usize,
        transforms: Vec::new(),
        seed: cfg.seed,
        stopping: schedule.stopping(),
        config: cfg.clone(),
        wall_time_ms: None,
    };
    if m.is_target(m.initial()) {
        result.lo = 1.0;
        result.converged = true;
        return Ok((result, CountsTable::for_model(&ground).to_csv(&ground)));
    }
    let shape: Vec<usize> = (0..n).map(|s| m.actions(s).len()).collect();
    let mut counts = CountsTable::with_shape(&shape);
    let mut complete = blackbox_support_update(&counts, cfg.ci_method, |_, _| delta_t, cfg.p_min)?;
    while let Some(size) = schedule.size(result.batches) {
        let absorbing: Vec<bool> = (0..n)
            .map(|s| {
                !m.is_target(s)
                    && (0..shape[s]).all(|a| {
                        complete[s][a] && counts.get(s, a).successors.iter().all(|&(t, _)| t == s)
                    })
            })
            .collect();
        let paths = batch(counts.paths(), size, |i| {
            sample_black_path(
                m,
                cfg.step_cap,
                &|s| absorbing[s],
                run_limit as u64,
                &mut path_rng(cfg.seed, i),
            )
        });
        for p in &paths {
            counts.absorb(p);
        }
        result.batches += 1;
        complete = blackbox_support_update(&counts, cfg.ci_method, |_, _| delta_t, cfg.p_min)?;
        let imdp = black_imdp(m, &counts, &complete, cfg.ci_method, delta_t)?;
        let b = solve(&imdp, cfg.epsilon)?;
        result.lo = b.lo[m.initial()];
        result.hi = b.hi[m.initial()];
        result.converged = result.width() <= cfg.epsilon;
        if result.converged {
            break;
        }
    }
    result.paths = counts.paths();
    result.capped_paths = counts.capped();
    Ok((result, counts.to_csv(&ground)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::exact::exact_reachability_value;
    use crate::model::parse_model;

    fn quick(cfg: RunConfig) -> RunConfig {
        RunConfig {
            epsilon: 0.1,
            batch_size: 200,
            max_batches: 500,
            ..cfg
        }
    }

    #[test]
    fn value_one_initial_needs_no_paths() {
        let m = parse_model(
            r#"{"states":["s","g"],"initial":"s","target":["g"],
               "actions":{"s":{"a":{"g":1}},"g":{"l":{"g":1}}}}"#,
        )
        .unwrap();
        let r = run_smc(&m, &RunConfig::full()).unwrap();
        assert_eq!((r.lo, r.hi, r.paths), (1.0, 1.0, 0));
        assert!(r.converged);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let m = bundled::load("fig2").unwrap();
        for cfg in [
            RunConfig {
                epsilon: 0.0,
                ..RunConfig::full()
            },
            RunConfig {
                delta: 1.0,
                ..RunConfig::full()
            },
            RunConfig {
                batch_size: 0,
                ..RunConfig::full()
            },
            RunConfig {
                ci_method: CiMethod::WilsonCc,
                ..RunConfig::full()
            },
        ] {
            assert!(matches!(
                run_smc(&m, &cfg),
                Err(PipelineError::InvalidConfig(_))
            ));
        }
    }

    #[test]
    fn full_run_on_fig2_contains_the_value() {
        let m = bundled::load("fig2").unwrap();
        let exact = exact_reachability_value(&m, 1e-12)[m.initial()];
        let r = run_smc(&m, &quick(RunConfig::full())).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.width() <= 0.1);
        assert!(r.contains(exact), "{} not in [{}, {}]", exact, r.lo, r.hi);
        assert_eq!(r.paths % 200, 0);
    }

    #[test]
    fn results_are_reproducible() {
        let m = bundled::load("mec_rooms").unwrap();
        let cfg = quick(RunConfig {
            seed: 5,
            ..RunConfig::full()
        });
        let a = run_smc(&m, &cfg).unwrap().to_json();
        let b = run_smc(&m, &cfg).unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("wall_time"));
    }

    #[test]
    fn fixed_budget_solves_once() {
        let m = bundled::load("ladder").unwrap();
        let cfg = RunConfig {
            fixed_paths: Some(300),
            ..RunConfig::full()
        };
        let r = run_smc(&m, &cfg).unwrap();
        assert_eq!((r.paths, r.batches), (300, 1));
        assert!(r.lo <= r.hi);
        assert_eq!(r.stopping.protocol, "fixed-paths");
    }

    #[test]
    fn black_mode_is_sound_on_fig2() {
        let m = bundled::load("fig2").unwrap();
        let exact = exact_reachability_value(&m, 1e-12)[m.initial()];
        let cfg = RunConfig {
            mode: SamplingMode::Black,
            p_min: 0.2,
            epsilon: 0.2,
            batch_size: 500,
            max_batches: 200,
            ..RunConfig::full()
        };
        let r = run_smc(&m, &cfg).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.contains(exact));
    }
}
