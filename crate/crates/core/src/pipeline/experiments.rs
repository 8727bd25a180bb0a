//! Ablation tables, coverage experiments and figure data.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::binomial::{
    format_sig, ratio_csv, ratio_grid, required_n_at_phat, uniform_grid, CiError, CiMethod,
    CoverageTable,
};
use crate::exact::exact_reachability_value;
use crate::model::Mdp;

use super::{run_smc, PipelineError, RunConfig};

/// One improvement that can be switched off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AblationAxis {
    Cp,
    SmallSupport,
    Independence,
    Equivalence,
    Chains,
    SccFragments,
    /// Everything at once: the baseline.
    All,
}

impl AblationAxis {
    pub const SINGLE: [AblationAxis; 6] = [
        AblationAxis::Cp,
        AblationAxis::SmallSupport,
        AblationAxis::Independence,
        AblationAxis::Equivalence,
        AblationAxis::Chains,
        AblationAxis::SccFragments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AblationAxis::Cp => "cp",
            AblationAxis::SmallSupport => "small-support",
            AblationAxis::Independence => "independence",
            AblationAxis::Equivalence => "equivalence",
            AblationAxis::Chains => "chains",
            AblationAxis::SccFragments => "scc-fragments",
            AblationAxis::All => "all",
        }
    }

    /// `cfg` with this improvement removed.
    pub fn remove_from(self, cfg: &RunConfig) -> RunConfig {
        let mut c = cfg.clone();
        match self {
            AblationAxis::Cp => c.ci_method = CiMethod::Hoeffding,
            AblationAxis::SmallSupport => c.small_support = false,
            AblationAxis::Independence => c.independence = false,
            AblationAxis::Equivalence => c.equivalence = false,
            AblationAxis::Chains => c.chains = false,
            AblationAxis::SccFragments => c.scc_fragments = false,
            AblationAxis::All => {
                for axis in AblationAxis::SINGLE {
                    c = axis.remove_from(&c);
                }
            }
        }
        c
    }
}

impl std::str::FromStr for AblationAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AblationAxis::SINGLE
            .into_iter()
            .chain([AblationAxis::All])
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown ablation axis `{s}`"))
    }
}

/// Paths needed with and without one improvement on one model, summed over seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationCell {
    pub model: String,
    pub axis: AblationAxis,
    pub paths_full: u64,
    pub paths_without: Option<u64>,
    /// `paths_without / paths_full`.
    pub ratio: Option<f64>,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSummary {
    pub axis: AblationAxis,
    pub min: f64,
    pub geomean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationReport {
    pub seeds: Vec<u64>,
    pub cells: Vec<AblationCell>,
    pub summary: Vec<AxisSummary>,
}

struct Total {
    paths: u64,
    converged: bool,
}

fn total_paths(m: &Mdp, cfg: &RunConfig, seeds: &[u64]) -> Result<Total, PipelineError> {
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            run_smc(
                m,
                &RunConfig {
                    seed,
                    ..cfg.clone()
                },
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Total {
        paths: runs.iter().map(|r| r.paths).sum(),
        converged: runs.iter().all(|r| r.converged),
    })
}

/// Full configuration against full-minus-one for every model and axis.
///
/// A failing model or cell is reported in its cells and does not stop the others.
pub fn run_ablation(
    models: &[(String, Mdp)],
    cfg: &RunConfig,
    axes: &[AblationAxis],
    seeds: &[u64],
) -> AblationReport {
    let mut cells = Vec::new();
    for (name, m) in models {
        let model_cfg = RunConfig {
            model: name.clone(),
            ..cfg.clone()
        };
        let full = total_paths(m, &model_cfg, seeds);
        let row: Vec<AblationCell> = axes
            .par_iter()
            .map(|&axis| {
                let mut cell = AblationCell {
                    model: name.clone(),
                    axis,
                    paths_full: 0,
                    paths_without: None,
                    ratio: None,
                    converged: false,
                    error: None,
                };
                let full = match &full {
                    Ok(f) => f,
                    Err(e) => {
                        cell.error = Some(e.to_string());
                        return cell;
                    }
                };
                cell.paths_full = full.paths;
                match total_paths(m, &axis.remove_from(&model_cfg), seeds) {
                    Ok(without) => {
                        cell.paths_without = Some(without.paths);
                        cell.ratio = Some(without.paths as f64 / full.paths.max(1) as f64);
                        cell.converged = full.converged && without.converged;
                    }
                    Err(e) => cell.error = Some(e.to_string()),
                }
                cell
            })
            .collect();
        cells.extend(row);
    }
    let summary = axes
        .iter()
        .filter_map(|&axis| {
            let ratios: Vec<f64> = cells
                .iter()
                .filter(|c| c.axis == axis)
                .filter_map(|c| c.ratio)
                .collect();
            (!ratios.is_empty()).then(|| AxisSummary {
                axis,
                min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                geomean: (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp(),
                max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            })
        })
        .collect();
    AblationReport {
        seeds: seeds.to_vec(),
        cells,
        summary,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub model: String,
    pub ci_method: CiMethod,
    pub delta: f64,
    pub paths_per_trial: u64,
    pub trials: u64,
    pub exact: f64,
    pub contained: u64,
    pub fraction: f64,
    pub mean_width: f64,
}

/// Runs `trials` seeded runs (seeds `cfg.seed + i`) at the fixed path budget of
/// `cfg` and counts how often the exact value lies inside the bounds.
pub fn coverage_experiment(
    m: &Mdp,
    cfg: &RunConfig,
    trials: u64,
) -> Result<CoverageReport, PipelineError> {
    let Some(paths) = cfg.fixed_paths else {
        return Err(PipelineError::InvalidConfig(
            "coverage experiments need a fixed path budget".into(),
        ));
    };
    cfg.validate()?;
    let exact = exact_reachability_value(m, 1e-12)[m.initial()];
    let runs = (0..trials)
        .into_par_iter()
        .map(|i| {
            run_smc(
                m,
                &RunConfig {
                    seed: cfg.seed.wrapping_add(i),
                    ..cfg.clone()
                },
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let contained = runs.iter().filter(|r| r.contains(exact)).count() as u64;
    Ok(CoverageReport {
        model: cfg.model.clone(),
        ci_method: cfg.ci_method,
        delta: cfg.delta,
        paths_per_trial: paths,
        trials,
        exact,
        contained,
        fraction: contained as f64 / trials.max(1) as f64,
        mean_width: runs.iter().map(|r| r.width()).sum::<f64>() / trials.max(1) as f64,
    })
}

/// Grids of the emitted figure data.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSettings {
    /// Budget of the ratio-over-precision curve.
    pub eps_delta: f64,
    pub eps_grid: Vec<f64>,
    /// Precision and budget of the ratio-over-rate curve.
    pub phat_epsilon: f64,
    pub phat_delta: f64,
    pub phat_grid: Vec<f64>,
    pub grid_deltas: Vec<f64>,
    pub grid_epsilons: Vec<f64>,
    pub coverage_n: u64,
    pub coverage_deltas: Vec<f64>,
    pub coverage_points: usize,
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

impl Default for FigureSettings {
    fn default() -> Self {
        let mut phat_grid = vec![0.001, 0.002, 0.005];
        phat_grid.extend((1..=99).map(|i| i as f64 / 100.0));
        phat_grid.extend([0.995, 0.998, 0.999]);
        let axis = vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5];
        FigureSettings {
            eps_delta: 0.01,
            eps_grid: log_grid(0.001, 0.5, 25),
            phat_epsilon: 0.01,
            phat_delta: 0.01,
            phat_grid,
            grid_deltas: axis.clone(),
            grid_epsilons: axis,
            coverage_n: 100,
            coverage_deltas: vec![0.01, 0.1],
            coverage_points: 1001,
        }
    }
}

pub const PHAT_HEADER: &str = "p_hat,epsilon,delta,n_hoeffding,n_cp,ratio";
pub const COVERAGE_HEADER: &str = "n,delta,p,coverage";

fn phat_csv(s: &FigureSettings) -> Result<String, CiError> {
    let rows = s
        .phat_grid
        .par_iter()
        .map(|&p| {
            let h = required_n_at_phat(CiMethod::Hoeffding, s.phat_delta, s.phat_epsilon, p)?;
            let c = required_n_at_phat(CiMethod::ClopperPearson, s.phat_delta, s.phat_epsilon, p)?;
            Ok((p, h, c))
        })
        .collect::<Result<Vec<_>, CiError>>()?;
    let mut out = format!("{PHAT_HEADER}\n");
    for (p, h, c) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig(p),
            format_sig(s.phat_epsilon),
            format_sig(s.phat_delta),
            h,
            c,
            format_sig(h as f64 / c as f64)
        );
    }
    Ok(out)
}

fn coverage_csv(s: &FigureSettings) -> Result<String, CiError> {
    let mut out = format!("{COVERAGE_HEADER}\n");
    for &delta in &s.coverage_deltas {
        let table = CoverageTable::new(CiMethod::WilsonCc, s.coverage_n, delta)?;
        for p in uniform_grid(s.coverage_points) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.coverage_n,
                format_sig(delta),
                format_sig(p),
                format_sig(table.coverage(p))
            );
        }
    }
    Ok(out)
}

/// Writes `ratio_eps.csv`, `ratio_phat.csv`, `ratio_grid.csv` and
/// `coverage_wilson.csv` into `dir` and returns their paths.
pub fn emit_figures(dir: &Path, s: &FigureSettings) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let to_io = |e: CiError| io::Error::other(e.to_string());
    let files = [
        (
            "ratio_eps.csv",
            ratio_grid(&[s.eps_delta], &s.eps_grid).map(|c| ratio_csv(&c)),
        ),
        ("ratio_phat.csv", phat_csv(s)),
        (
            "ratio_grid.csv",
            ratio_grid(&s.grid_deltas, &s.grid_epsilons).map(|c| ratio_csv(&c)),
        ),
        ("coverage_wilson.csv", coverage_csv(s)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body.map_err(to_io)?)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn removing_everything_is_the_baseline() {
        let full = RunConfig::full();
        assert_eq!(AblationAxis::All.remove_from(&full), RunConfig::baseline());
        for a in AblationAxis::SINGLE {
            assert_eq!(a.name().parse::<AblationAxis>().unwrap(), a);
            assert_ne!(a.remove_from(&full), full);
        }
    }

    #[test]
    fn inapplicable_improvement_has_ratio_one() {
        // A single coin flip has no chains or fragments to remove.
        let m = bundled::load("rare_coin").unwrap();
        let cfg = RunConfig {
            epsilon: 0.02,
            batch_size: 100,
            ..RunConfig::full()
        };
        let report = run_ablation(
            &[("rare_coin".into(), m)],
            &cfg,
            &[AblationAxis::Chains, AblationAxis::SccFragments],
            &[1, 2],
        );
        for c in &report.cells {
            assert_eq!(c.ratio, Some(1.0), "{c:?}");
        }
        assert_eq!(report.summary.len(), 2);
    }

    #[test]
    fn coverage_needs_fixed_budget() {
        let m = bundled::load("fig2").unwrap();
        assert!(coverage_experiment(&m, &RunConfig::full(), 3).is_err());
        let cfg = RunConfig {
            fixed_paths: Some(200),
            delta: 0.99,
            ..RunConfig::full()
        };
        let r = coverage_experiment(&m, &cfg, 20).unwrap();
        assert_eq!(r.trials, 20);
        assert!((r.exact - 0.85).abs() < 1e-9);
    }

    #[test]
    fn figure_files_have_documented_headers() {
        let dir = std::env::temp_dir().join(format!("smc-figures-{}", std::process::id()));
        let s = FigureSettings {
            eps_grid: vec![0.1, 0.3],
            phat_grid: vec![0.01, 0.5],
            grid_deltas: vec![0.01, 0.1],
            grid_epsilons: vec![0.1],
            coverage_points: 11,
            ..FigureSettings::default()
        };
        let files = emit_figures(&dir, &s).unwrap();
        let headers: Vec<String> = files
            .iter()
            .map(|f| {
                fs::read_to_string(f)
                    .unwrap()
                    .lines()
                    .next()
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(
            headers,
            [
                "delta,epsilon,n_hoeffding,n_cp,ratio",
                PHAT_HEADER,
                "delta,epsilon,n_hoeffding,n_cp,ratio",
                COVERAGE_HEADER
            ]
        );
        let coverage = fs::read_to_string(&files[3]).unwrap();
        assert_eq!(coverage.lines().count(), 1 + 2 * 11);
        fs::remove_dir_all(&dir).unwrap();
    }
}
