//! Model-based statistical model checking for MDPs with unknown transition
//! probabilities.
//!
//! Transition probabilities are estimated from simulated paths with sound
//! binomial confidence intervals, the model is shrunk by structural
//! transformations, and the resulting interval MDP is solved to obtain a
//! probably-approximately-correct bound on the maximal reachability value.

pub mod binomial;
pub mod budget;
pub mod bundled;
pub mod exact;
pub mod graph;
mod linalg;
pub mod model;
pub mod pipeline;
pub mod random;
pub mod sampler;
pub mod solver;

pub use binomial::{Ci, CiError, CiMethod, SampleCounts};
pub use budget::{AllocationMode, BudgetPlan, EstimationTask};
pub use exact::exact_reachability_value;
pub use graph::{Quotient, TransformConfig, TransformReport};
pub use model::{parse_model, serialize_model, support_view, Mdp, ModelError, SupportMdp};
pub use pipeline::{run_smc, run_smc_with_counts, PipelineError, RunConfig, RunResult};
pub use sampler::{CountsTable, SamplerConfig, SamplingMode};
pub use solver::{interval_iteration, Interval, IntervalDistribution, IntervalMdp, ValueBounds};
