//! `smc`: statistical model checking of maximal reachability with PAC bounds.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use smc_core::binomial::CiMethod;
use smc_core::pipeline::{
    coverage_experiment, emit_figures, run_ablation, AblationAxis, FigureSettings,
};
use smc_core::{
    bundled, exact_reachability_value, parse_model, run_smc_with_counts, support_view, Mdp,
    Quotient, RunConfig, SamplingMode,
};

#[derive(Parser)]
#[command(
    name = "smc",
    version,
    about = "Statistical model checking for MDPs with PAC guarantees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the maximal reachability value of a model.
    Run(RunArgs),
    /// Compare the full configuration against full-minus-one per improvement.
    Ablate(AblateArgs),
    /// Count how often fixed-budget runs contain the exact value.
    Coverage(CoverageArgs),
    /// Write the sample-size and coverage figure data as CSV.
    Figures(FiguresArgs),
    /// Compute the exact value from the known probabilities.
    Solve(ModelArg),
    /// Print the structural transformations applied to a model.
    Transform(TransformArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Full,
    Baseline,
}

#[derive(Args)]
struct ModelArg {
    /// Model file (JSON) or bundled model name.
    model: String,
}

#[derive(Args)]
struct Toggles {
    #[arg(long, value_name = "BOOL")]
    small_support: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    independence: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    equivalence: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    chains: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    scc_fragments: Option<bool>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Starting point that the remaining flags override.
    #[arg(long, value_enum, default_value = "full")]
    preset: Preset,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// hoeffding, clopper-pearson, wilson-cc, scenario or bennett.
    #[arg(long)]
    ci_method: Option<CiMethod>,
    #[command(flatten)]
    toggles: Toggles,
    #[arg(long)]
    batch_size: Option<u64>,
    #[arg(long)]
    max_batches: Option<u64>,
    /// Sample exactly this many paths and solve once.
    #[arg(long)]
    fixed_paths: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// grey or black.
    #[arg(long)]
    mode: Option<SamplingMode>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    step_cap: Option<u64>,
    /// Allow interval methods without a coverage guarantee.
    #[arg(long)]
    allow_unsound: bool,
    /// Also write the JSON document to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the final counts table as CSV to this file (run only).
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Record wall time in the result.
    #[arg(long)]
    timing: bool,
}

impl ConfigArgs {
    fn config(&self, model: &str) -> RunConfig {
        let mut c = match self.preset {
            Preset::Full => RunConfig::full(),
            Preset::Baseline => RunConfig::baseline(),
        };
        c.model = model.to_string();
        macro_rules! set {
            ($($field:ident).+ => $target:ident) => {
                if let Some(v) = self.$($field).+ {
                    c.$target = v;
                }
            };
        }
        set!(epsilon => epsilon);
        set!(delta => delta);
        set!(ci_method => ci_method);
        set!(toggles.small_support => small_support);
        set!(toggles.independence => independence);
        set!(toggles.equivalence => equivalence);
        set!(toggles.chains => chains);
        set!(toggles.scc_fragments => scc_fragments);
        set!(batch_size => batch_size);
        set!(max_batches => max_batches);
        set!(seed => seed);
        set!(mode => mode);
        set!(p_min => p_min);
        set!(step_cap => step_cap);
        if self.fixed_paths.is_some() {
            c.fixed_paths = self.fixed_paths;
        }
        c.allow_unsound |= self.allow_unsound;
        c.output = self.output.clone();
        c.counts = self.counts.clone();
        c.timing = self.timing;
        c
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    model: ModelArg,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct AblateArgs {
    /// Model files or bundled names; all bundled models when empty.
    models: Vec<String>,
    /// Comma-separated axes (cp, small-support, independence, equivalence, chains,
    /// scc-fragments, all); every single axis when omitted.
    #[arg(long, value_delimiter = ',')]
    axes: Vec<AblationAxis>,
    /// Number of seeds, starting at the configured seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    model: ModelArg,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct FiguresArgs {
    /// Output directory.
    #[arg(long, default_value = "figures")]
    out: PathBuf,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    model: ModelArg,
    #[command(flatten)]
    toggles: Toggles,
}

fn load_model(name: &str) -> Result<Mdp> {
    let path = Path::new(name);
    if path.exists() {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_model(&text).with_context(|| format!("parsing {}", path.display()));
    }
    match bundled::load(name) {
        Some(m) => Ok(m),
        None => bail!(
            "no model file `{name}` and no bundled model of that name (bundled: {})",
            bundled::NAMES.join(", ")
        ),
    }
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    if let Some(path) = output {
        fs::write(path, format!("{json}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    // A closed stdout (e.g. piped into `head`) is not an error.
    let _ = writeln!(io::stdout().lock(), "{json}");
    Ok(())
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    model: &'a str,
    initial: &'a str,
    value: f64,
    values: serde_json::Map<String, serde_json::Value>,
}

#[derive(Serialize)]
struct TransformOutput<'a> {
    model: &'a str,
    ground_states: usize,
    states: usize,
    transitions: usize,
    transforms: &'a [smc_core::TransformReport],
}

/// Exit status of a completed command.
enum Outcome {
    Done,
    NotConverged,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Run(args) => {
            let m = load_model(&args.model.model)?;
            let cfg = args.config.config(&args.model.model);
            let (result, counts) = run_smc_with_counts(&m, &cfg)?;
            if let Some(path) = &cfg.counts {
                fs::write(path, counts).with_context(|| format!("writing {}", path.display()))?;
            }
            emit(&result, cfg.output.as_deref())?;
            Ok(if result.converged {
                Outcome::Done
            } else {
                Outcome::NotConverged
            })
        }
        Command::Ablate(args) => {
            let names: Vec<String> = if args.models.is_empty() {
                bundled::NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                args.models.clone()
            };
            let models = names
                .iter()
                .map(|n| Ok((n.clone(), load_model(n)?)))
                .collect::<Result<Vec<_>>>()?;
            let axes = if args.axes.is_empty() {
                AblationAxis::SINGLE.to_vec()
            } else {
                args.axes.clone()
            };
            let cfg = args.config.config("");
            cfg.validate()?;
            let seeds: Vec<u64> = (0..args.seeds).map(|i| cfg.seed.wrapping_add(i)).collect();
            let report = run_ablation(&models, &cfg, &axes, &seeds);
            emit(&report, cfg.output.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Coverage(args) => {
            let m = load_model(&args.model.model)?;
            let mut cfg = args.config.config(&args.model.model);
            cfg.fixed_paths.get_or_insert(1000);
            let report = coverage_experiment(&m, &cfg, args.trials)?;
            emit(&report, cfg.output.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Figures(args) => {
            let files = emit_figures(&args.out, &FigureSettings::default())
                .with_context(|| format!("writing figures to {}", args.out.display()))?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(Outcome::Done)
        }
        Command::Solve(args) => {
            let m = load_model(&args.model)?;
            let v = exact_reachability_value(&m, 1e-12);
            let values = (0..m.num_states())
                .map(|s| (m.name(s).to_string(), serde_json::Value::from(v[s])))
                .collect();
            emit(
                &SolveOutput {
                    model: &args.model,
                    initial: m.name(m.initial()),
                    value: v[m.initial()],
                    values,
                },
                None,
            )?;
            Ok(Outcome::Done)
        }
        Command::Transform(args) => {
            let m = load_model(&args.model.model)?;
            let cfg = ConfigArgs {
                preset: Preset::Full,
                epsilon: None,
                delta: None,
                ci_method: None,
                toggles: args.toggles,
                batch_size: None,
                max_batches: None,
                fixed_paths: None,
                seed: None,
                mode: None,
                p_min: None,
                step_cap: None,
                allow_unsound: false,
                output: None,
                counts: None,
                timing: false,
            }
            .config(&args.model.model);
            let q = Quotient::build(&support_view(&m), cfg.transforms());
            emit(
                &TransformOutput {
                    model: &args.model.model,
                    ground_states: m.num_states(),
                    states: q.model().num_states(),
                    transitions: q.model().transition_count(),
                    transforms: q.transforms(),
                },
                None,
            )?;
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
