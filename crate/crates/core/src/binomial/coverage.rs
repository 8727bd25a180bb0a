//! Exact coverage probabilities by enumerating all binomial outcomes.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::ci::{Ci, CiError, CiMethod, SampleCounts};

/// Largest trial count accepted for exact enumeration.
pub const MAX_ENUMERATION: u64 = 10_000;

/// `ln P[Bin(n, p) = k]` for `0 < p < 1`.
fn ln_pmf(ln_choose: f64, n: u64, k: u64, p: f64) -> f64 {
    ln_choose + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
}

/// All `n + 1` intervals of a method, reused across many true parameters.
#[derive(Debug, Clone)]
pub struct CoverageTable {
    n: u64,
    intervals: Vec<Ci>,
    ln_choose: Vec<f64>,
}

impl CoverageTable {
    pub fn new(method: CiMethod, n: u64, delta: f64) -> Result<Self, CiError> {
        assert!(
            (1..=MAX_ENUMERATION).contains(&n),
            "exact enumeration supports 1 <= n <= {MAX_ENUMERATION}"
        );
        let intervals = (0..=n)
            .map(|k| method.interval(SampleCounts { n, k }, delta))
            .collect::<Result<Vec<_>, _>>()?;
        let ln_n = ln_gamma(n as f64 + 1.0);
        let ln_choose = (0..=n)
            .map(|k| ln_n - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
            .collect();
        Ok(CoverageTable {
            n,
            intervals,
            ln_choose,
        })
    }

    pub fn intervals(&self) -> &[Ci] {
        &self.intervals
    }

    /// Probability that the interval computed from `Bin(n, p)` data contains `p`.
    pub fn coverage(&self, p: f64) -> f64 {
        let n = self.n;
        let covered = |k: u64| self.intervals[k as usize].contains(p);
        if p <= 0.0 {
            return if covered(0) { 1.0 } else { 0.0 };
        }
        if p >= 1.0 {
            return if covered(n) { 1.0 } else { 0.0 };
        }
        let total: f64 = (0..=n)
            .filter(|&k| covered(k))
            .map(|k| ln_pmf(self.ln_choose[k as usize], n, k, p).exp())
            .sum();
        total.min(1.0)
    }

    /// Minimum coverage over `grid` together with points just outside every interval endpoint.
    ///
    /// Coverage is piecewise smooth with downward jumps where `p` leaves an interval, so the
    /// infimum is approached immediately beyond an endpoint; a finite grid alone can miss it.
    pub fn min_coverage(&self, grid: &[f64]) -> (f64, f64) {
        const NUDGE: f64 = 1e-12;
        let mut points: Vec<f64> = grid.to_vec();
        for ci in &self.intervals {
            points.extend([ci.lo - NUDGE, ci.hi + NUDGE]);
        }
        points
            .into_iter()
            .filter(|p| (0.0..=1.0).contains(p))
            .map(|p| (p, self.coverage(p)))
            .fold((f64::NAN, f64::INFINITY), |best, (p, c)| {
                if c < best.1 {
                    (p, c)
                } else {
                    best
                }
            })
    }
}

pub fn exact_coverage(method: CiMethod, n: u64, delta: f64, p: f64) -> Result<f64, CiError> {
    Ok(CoverageTable::new(method, n, delta)?.coverage(p))
}

/// `points` equally spaced values covering `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Minimum coverage (and its location) over a `points`-point grid refined at interval endpoints.
pub fn min_coverage(
    method: CiMethod,
    n: u64,
    delta: f64,
    points: usize,
) -> Result<CoverageMinimum, CiError> {
    let table = CoverageTable::new(method, n, delta)?;
    let (p, coverage) = table.min_coverage(&uniform_grid(points));
    Ok(CoverageMinimum {
        method,
        n,
        delta,
        p,
        coverage,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageMinimum {
    pub method: CiMethod,
    pub n: u64,
    pub delta: f64,
    pub p: f64,
    pub coverage: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_is_always_covered() {
        for m in CiMethod::ALL {
            assert_eq!(exact_coverage(m, 50, 0.1, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn half_coin_coverage_by_hand() {
        // n = 1: the interval for k = 0 is [0, 0.95] at δ = 0.1 and contains 0.5; same for k = 1.
        let c = exact_coverage(CiMethod::ClopperPearson, 1, 0.1, 0.5).unwrap();
        assert!((c - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_sums_to_one() {
        let t = CoverageTable::new(CiMethod::Hoeffding, 200, 0.999_999).unwrap();
        let total: f64 = (0..=200u64)
            .map(|k| ln_pmf(t.ln_choose[k as usize], 200, k, 0.37).exp())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clopper_pearson_is_sound() {
        for n in [10, 50, 100] {
            for delta in [0.1, 0.01] {
                let m = min_coverage(CiMethod::ClopperPearson, n, delta, 1001).unwrap();
                assert!(m.coverage >= 1.0 - delta, "{m:?}");
            }
        }
    }

    #[test]
    fn wilson_cc_loses_coverage() {
        let m = min_coverage(CiMethod::WilsonCc, 100, 0.01, 1001).unwrap();
        assert!(m.coverage < 0.97, "{m:?}");
        let m = min_coverage(CiMethod::WilsonCc, 100, 0.1, 1001).unwrap();
        assert!(m.coverage >= 0.9, "{m:?}");
    }
}
