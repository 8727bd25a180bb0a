//! Sample-complexity solvers and the Hoeffding/Clopper-Pearson ratio grid.

use serde::Serialize;

use super::ci::{CiError, CiMethod, SampleCounts};
use super::format_sig;
use super::special::SpecialError;

/// Width of the `method` interval with `n` trials and `k = round(rate * n)` successes.
fn width_at(method: CiMethod, delta: f64, n: u64, k: u64) -> Result<f64, CiError> {
    Ok(method.interval(SampleCounts { n, k }, delta)?.width())
}

/// Smallest `n` with `fits(n)`, assuming `fits` is (eventually) monotone in `n`.
fn search(mut fits: impl FnMut(u64) -> Result<bool, CiError>) -> Result<u64, CiError> {
    if fits(1)? {
        return Ok(1);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !fits(hi)? {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .ok_or(CiError::Numerical(SpecialError::NoConvergence(
                "sample-size search",
            )))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest number of trials whose worst-case (balanced) interval has width at most `epsilon`.
pub fn worst_case_n(method: CiMethod, delta: f64, epsilon: f64) -> Result<u64, CiError> {
    search(|n| Ok(width_at(method, delta, n, n / 2)? <= epsilon))
}

/// Smallest number of trials whose interval at empirical rate `p_hat` has width at most `epsilon`.
pub fn required_n_at_phat(
    method: CiMethod,
    delta: f64,
    epsilon: f64,
    p_hat: f64,
) -> Result<u64, CiError> {
    assert!(
        (0.0..=1.0).contains(&p_hat),
        "empirical rate must lie in [0,1]"
    );
    search(|n| {
        let k = ((p_hat * n as f64).round() as u64).min(n);
        Ok(width_at(method, delta, n, k)? <= epsilon)
    })
}

/// One cell of the Hoeffding-over-Clopper-Pearson sample-size comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCell {
    pub delta: f64,
    pub epsilon: f64,
    pub n_hoeffding: u64,
    pub n_cp: u64,
    pub ratio: f64,
}

pub fn ratio_cell(delta: f64, epsilon: f64) -> Result<RatioCell, CiError> {
    let n_hoeffding = worst_case_n(CiMethod::Hoeffding, delta, epsilon)?;
    let n_cp = worst_case_n(CiMethod::ClopperPearson, delta, epsilon)?;
    Ok(RatioCell {
        delta,
        epsilon,
        n_hoeffding,
        n_cp,
        ratio: n_hoeffding as f64 / n_cp as f64,
    })
}

/// Ratio table over `deltas × epsilons`, row-major by epsilon.
pub fn ratio_grid(deltas: &[f64], epsilons: &[f64]) -> Result<Vec<RatioCell>, CiError> {
    use rayon::prelude::*;
    let cells: Vec<(f64, f64)> = epsilons
        .iter()
        .flat_map(|&e| deltas.iter().map(move |&d| (d, e)))
        .collect();
    cells
        .into_par_iter()
        .map(|(d, e)| ratio_cell(d, e))
        .collect()
}

pub const RATIO_HEADER: &str = "delta,epsilon,n_hoeffding,n_cp,ratio";

pub fn ratio_csv(cells: &[RatioCell]) -> String {
    let mut out = String::from(RATIO_HEADER);
    out.push('\n');
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig(c.delta),
            format_sig(c.epsilon),
            c.n_hoeffding,
            c.n_cp,
            format_sig(c.ratio)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::hoeffding_halfwidth;

    #[test]
    fn hoeffding_closed_form() {
        let n = worst_case_n(CiMethod::Hoeffding, 0.01, 0.1).unwrap();
        assert_eq!(n, 1060);
        assert!(2.0 * hoeffding_halfwidth(1060, 0.01) <= 0.1);
        assert!(2.0 * hoeffding_halfwidth(1059, 0.01) > 0.1);
    }

    #[test]
    fn wide_epsilon_needs_one_sample() {
        for m in [
            CiMethod::Hoeffding,
            CiMethod::ClopperPearson,
            CiMethod::WilsonCc,
        ] {
            assert_eq!(worst_case_n(m, 0.1, 1.0).unwrap(), 1);
        }
    }

    #[test]
    fn balanced_rate_matches_worst_case() {
        for m in [CiMethod::Hoeffding, CiMethod::ClopperPearson] {
            for eps in [0.05, 0.1, 0.2] {
                let w = worst_case_n(m, 0.01, eps).unwrap();
                let p = required_n_at_phat(m, 0.01, eps, 0.5).unwrap();
                // round(n/2) and floor(n/2) only differ for odd n, where the widths coincide by symmetry
                assert_eq!(w, p, "{m} eps={eps}");
            }
        }
    }

    #[test]
    fn cp_zero_rate_closed_form() {
        let (delta, eps) = (0.01_f64, 0.01_f64);
        let n = required_n_at_phat(CiMethod::ClopperPearson, delta, eps, 0.0).unwrap();
        let ok = |n: u64| (delta / 2.0).powf(1.0 / n as f64) >= 1.0 - eps;
        assert!(ok(n) && !ok(n - 1), "n = {n}");
    }

    #[test]
    fn ratio_near_one_and_a_half() {
        let c = ratio_cell(0.01, 0.1).unwrap();
        assert!((1.3..=1.8).contains(&c.ratio), "{c:?}");
    }

    #[test]
    fn extreme_rate_ratio_is_large() {
        let h = required_n_at_phat(CiMethod::Hoeffding, 0.01, 0.01, 0.01).unwrap();
        let c = required_n_at_phat(CiMethod::ClopperPearson, 0.01, 0.01, 0.01).unwrap();
        assert!(h as f64 / c as f64 >= 10.0, "{h} / {c}");
    }

    #[test]
    fn single_cell_grid_and_csv() {
        let g = ratio_grid(&[0.05], &[0.2]).unwrap();
        assert_eq!(g.len(), 1);
        let csv = ratio_csv(&g);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(RATIO_HEADER));
        assert!(lines
            .next()
            .unwrap()
            .starts_with("0.0500000000000,0.200000000000,"));
    }
}
