//! Confidence intervals for a single Bernoulli parameter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::special::{inverse_regularized_beta, normal_quantile, SpecialError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CiError {
    #[error("confidence budget {0} must lie in (0,1)")]
    InvalidDelta(f64),
    #[error("no samples: an interval needs n >= 1")]
    ZeroSamples,
    #[error("invalid counts: k = {k} exceeds n = {n}")]
    InvalidCounts { n: u64, k: u64 },
    #[error(transparent)]
    Numerical(#[from] SpecialError),
}

/// Number of trials and successes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub n: u64,
    pub k: u64,
}

impl SampleCounts {
    pub fn new(n: u64, k: u64) -> Result<Self, CiError> {
        if k > n {
            return Err(CiError::InvalidCounts { n, k });
        }
        Ok(SampleCounts { n, k })
    }

    /// Empirical rate `k/n`, undefined without samples.
    pub fn p_hat(&self) -> Option<f64> {
        (self.n > 0).then(|| self.k as f64 / self.n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethod {
    Hoeffding,
    ClopperPearson,
    WilsonCc,
    Scenario,
    BennettTrivialVariance,
}

impl CiMethod {
    pub const ALL: [CiMethod; 5] = [
        CiMethod::Hoeffding,
        CiMethod::ClopperPearson,
        CiMethod::WilsonCc,
        CiMethod::Scenario,
        CiMethod::BennettTrivialVariance,
    ];

    /// Whether the method guarantees coverage `1 − δ` for every true parameter.
    pub fn sound_for_smc(self) -> bool {
        matches!(self, CiMethod::Hoeffding | CiMethod::ClopperPearson)
    }

    pub fn status(self) -> &'static str {
        match self {
            CiMethod::Hoeffding | CiMethod::ClopperPearson => "sound for SMC",
            CiMethod::WilsonCc => "demonstration only",
            CiMethod::Scenario => "dominated by Clopper-Pearson",
            CiMethod::BennettTrivialVariance => "dominated by Hoeffding",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CiMethod::Hoeffding => "hoeffding",
            CiMethod::ClopperPearson => "clopper-pearson",
            CiMethod::WilsonCc => "wilson-cc",
            CiMethod::Scenario => "scenario",
            CiMethod::BennettTrivialVariance => "bennett",
        }
    }

    /// The interval for `c` at budget `delta`; requires at least one sample.
    pub fn interval(self, c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
        match self {
            CiMethod::Hoeffding => hoeffding_ci(c, delta),
            CiMethod::ClopperPearson => clopper_pearson_ci(c, delta),
            CiMethod::WilsonCc => wilson_cc_ci(c, delta),
            CiMethod::Scenario => scenario_ci(c, delta),
            CiMethod::BennettTrivialVariance => bennett_ci(c, delta),
        }
    }

    /// Like [`CiMethod::interval`], but `n = 0` yields the trivial interval `[0, 1]`.
    pub fn interval_or_trivial(self, c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
        if c.n == 0 {
            check_delta(delta)?;
            return Ok(Ci {
                lo: 0.0,
                hi: 1.0,
                method: self,
                delta,
            });
        }
        self.interval(c, delta)
    }
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CiMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hoeffding" => Ok(CiMethod::Hoeffding),
            "clopper-pearson" | "cp" => Ok(CiMethod::ClopperPearson),
            "wilson-cc" | "wilson" => Ok(CiMethod::WilsonCc),
            "scenario" => Ok(CiMethod::Scenario),
            "bennett" => Ok(CiMethod::BennettTrivialVariance),
            other => Err(format!(
                "unknown interval method `{other}` (expected hoeffding, clopper-pearson, wilson-cc, scenario or bennett)"
            )),
        }
    }
}

/// A confidence interval together with the method and budget that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ci {
    pub lo: f64,
    pub hi: f64,
    pub method: CiMethod,
    pub delta: f64,
}

impl Ci {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

fn check_delta(delta: f64) -> Result<(), CiError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(CiError::InvalidDelta(delta))
    }
}

fn check(c: SampleCounts, delta: f64) -> Result<(), CiError> {
    check_delta(delta)?;
    if c.k > c.n {
        return Err(CiError::InvalidCounts { n: c.n, k: c.k });
    }
    if c.n == 0 {
        return Err(CiError::ZeroSamples);
    }
    Ok(())
}

/// Half-width `sqrt(ln(2/δ) / 2n)` of the Hoeffding interval.
pub fn hoeffding_halfwidth(n: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

pub fn hoeffding_ci(c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
    check(c, delta)?;
    let p = c.k as f64 / c.n as f64;
    let h = hoeffding_halfwidth(c.n, delta);
    Ok(Ci {
        lo: (p - h).max(0.0),
        hi: (p + h).min(1.0),
        method: CiMethod::Hoeffding,
        delta,
    })
}

/// Exact (Clopper-Pearson) interval from beta quantiles.
pub fn clopper_pearson_ci(c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
    check(c, delta)?;
    let (n, k) = (c.n as f64, c.k as f64);
    let lo = if c.k == 0 {
        0.0
    } else {
        inverse_regularized_beta(delta / 2.0, k, n - k + 1.0)?
    };
    let hi = if c.k == c.n {
        1.0
    } else {
        1.0 - inverse_regularized_beta(delta / 2.0, n - k, k + 1.0)?
    };
    Ok(Ci {
        lo,
        hi,
        method: CiMethod::ClopperPearson,
        delta,
    })
}

/// Wilson score interval with continuity correction.
pub fn wilson_cc_ci(c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
    check(c, delta)?;
    let n = c.n as f64;
    let p = c.k as f64 / n;
    let z = -normal_quantile(delta / 2.0);
    let z2 = z * z;
    let denom = 2.0 * (n + z2);
    let centre = 2.0 * n * p + z2;
    let spread = z2 - 1.0 / n + 4.0 * n * p * (1.0 - p);
    let lo = if c.k == 0 {
        0.0
    } else {
        (centre - z * (spread + (4.0 * p - 2.0)).max(0.0).sqrt() - 1.0) / denom
    };
    let hi = if c.k == c.n {
        1.0
    } else {
        (centre + z * (spread - (4.0 * p - 2.0)).max(0.0).sqrt() + 1.0) / denom
    };
    Ok(Ci {
        lo: lo.clamp(0.0, 1.0),
        hi: hi.clamp(0.0, 1.0),
        method: CiMethod::WilsonCc,
        delta,
    })
}

/// The scenario-approach interval, which coincides with Clopper-Pearson at budget `δ/n`.
pub fn scenario_ci(c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
    check(c, delta)?;
    let ci = clopper_pearson_ci(c, delta / c.n as f64)?;
    Ok(Ci {
        method: CiMethod::Scenario,
        delta,
        ..ci
    })
}

fn bennett_h(x: f64) -> f64 {
    (1.0 + x) * x.ln_1p() - x
}

/// Smallest half-width `u` with `2 exp(−(n/4) h(4u)) ≤ δ`, `h(x) = (1+x)ln(1+x) − x`.
pub fn bennett_trivial_variance_halfwidth(n: u64, delta: f64) -> f64 {
    let n = n as f64;
    let need = 4.0 * (2.0 / delta).ln() / n;
    if need <= 0.0 {
        return 0.0;
    }
    let holds = |u: f64| bennett_h(4.0 * u) >= need;
    let mut hi = 1.0;
    while !holds(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn bennett_ci(c: SampleCounts, delta: f64) -> Result<Ci, CiError> {
    check(c, delta)?;
    let p = c.k as f64 / c.n as f64;
    let h = bennett_trivial_variance_halfwidth(c.n, delta);
    Ok(Ci {
        lo: (p - h).max(0.0),
        hi: (p + h).min(1.0),
        method: CiMethod::BennettTrivialVariance,
        delta,
    })
}

/// L1 radius `sqrt(2(ln(2^k − 2) − ln δ)/n)` of the multinomial confidence ball.
pub fn l1_ball_radius(k_successors: u32, n: u64, delta: f64) -> f64 {
    assert!(
        k_successors >= 2,
        "the L1 ball needs at least two successors"
    );
    let k = k_successors as f64;
    let ln_count = k * std::f64::consts::LN_2 + (-(2.0_f64.powf(1.0 - k))).ln_1p();
    (2.0 * (ln_count - delta.ln()) / n as f64).sqrt()
}

/// Limit ratio `(ln 2 − ln δ) / erfinv(1 − δ)²` of Hoeffding over Wilson sample sizes.
pub fn wilson_limit_ratio(delta: f64) -> f64 {
    // erfinv(1 − δ) = z_{1−δ/2} / √2
    let z = -normal_quantile(delta / 2.0);
    2.0 * (std::f64::consts::LN_2 - delta.ln()) / (z * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(n: u64, k: u64) -> SampleCounts {
        SampleCounts::new(n, k).unwrap()
    }

    /// P[Bin(n,p) <= k] by log-space pmf summation.
    fn binom_cdf(n: u64, k: u64, p: f64) -> f64 {
        if p <= 0.0 {
            return 1.0;
        }
        if p >= 1.0 {
            return if k >= n { 1.0 } else { 0.0 };
        }
        let mut total = 0.0;
        let mut log_choose = 0.0;
        for i in 0..=k {
            if i > 0 {
                log_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
            }
            total += (log_choose + i as f64 * p.ln() + (n - i) as f64 * (-p).ln_1p()).exp();
        }
        total.min(1.0)
    }

    fn bisect(mut lo: f64, mut hi: f64, below: impl Fn(f64) -> bool) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn coin_example_half_width() {
        let ci = hoeffding_ci(sc(1000, 800), 0.05).unwrap();
        let h = (ci.hi - ci.lo) / 2.0;
        assert!((h - 0.042_946_940_834_673_76).abs() < 1e-12);
        assert!((ci.lo - 0.757).abs() < 1e-3 && (ci.hi - 0.843).abs() < 1e-3);
    }

    #[test]
    fn hoeffding_clips_at_zero() {
        let ci = hoeffding_ci(sc(10, 0), 0.1).unwrap();
        assert_eq!(ci.lo, 0.0);
    }

    #[test]
    fn hoeffding_golden_width() {
        let ci = hoeffding_ci(sc(100, 50), 0.01).unwrap();
        assert!((ci.width() - 0.325_524_726_143_745_85).abs() < 1e-14);
    }

    #[test]
    fn clopper_pearson_k0_closed_form() {
        let ci = clopper_pearson_ci(sc(10, 0), 0.1).unwrap();
        assert_eq!(ci.lo, 0.0);
        assert!((ci.hi - 0.258_865_550_893_052_28).abs() < 1e-12);
        assert!((ci.hi - (1.0 - 0.05_f64.powf(0.1))).abs() < 1e-12);
    }

    #[test]
    fn clopper_pearson_kn_edge() {
        assert_eq!(clopper_pearson_ci(sc(10, 10), 0.1).unwrap().hi, 1.0);
    }

    #[test]
    fn clopper_pearson_golden_n10_k5() {
        let ci = clopper_pearson_ci(sc(10, 5), 0.1).unwrap();
        assert!((ci.lo - 0.222_441_101_008_129_08).abs() < 1e-12);
        assert!((ci.hi - 0.777_558_898_991_870_92).abs() < 1e-12);
    }

    #[test]
    fn clopper_pearson_centre_shifts_towards_half() {
        let ci = clopper_pearson_ci(sc(10, 2), 0.1).unwrap();
        assert!((ci.lo + ci.hi) / 2.0 > 0.2);
    }

    #[test]
    fn clopper_pearson_matches_bisection_oracle() {
        for &delta in &[0.1, 0.01] {
            for n in [1u64, 2, 7, 30, 64] {
                for k in 0..=n {
                    let ci = clopper_pearson_ci(sc(n, k), delta).unwrap();
                    let lo = if k == 0 {
                        0.0
                    } else {
                        bisect(0.0, 1.0, |p| 1.0 - binom_cdf(n, k - 1, p) < delta / 2.0)
                    };
                    let hi = if k == n {
                        1.0
                    } else {
                        bisect(0.0, 1.0, |p| binom_cdf(n, k, p) > delta / 2.0)
                    };
                    assert!((ci.lo - lo).abs() < 1e-9, "n={n} k={k}");
                    assert!((ci.hi - hi).abs() < 1e-9, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn wilson_cc_edges_and_golden() {
        assert_eq!(wilson_cc_ci(sc(100, 0), 0.05).unwrap().lo, 0.0);
        let ci = wilson_cc_ci(sc(100, 50), 0.1).unwrap();
        assert!((ci.lo - 0.413_983_460_534_318_24).abs() < 1e-10);
        assert!((ci.hi - 0.586_016_539_465_681_76).abs() < 1e-10);
        assert!((ci.lo + ci.hi - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scenario_is_cp_with_scaled_budget() {
        let a = scenario_ci(sc(10, 5), 0.1).unwrap();
        let b = clopper_pearson_ci(sc(10, 5), 0.01).unwrap();
        assert_eq!((a.lo, a.hi), (b.lo, b.hi));
        let a = scenario_ci(sc(1, 1), 0.2).unwrap();
        let b = clopper_pearson_ci(sc(1, 1), 0.2).unwrap();
        assert_eq!((a.lo, a.hi), (b.lo, b.hi));
    }

    #[test]
    fn bennett_golden_and_limit() {
        let u = bennett_trivial_variance_halfwidth(100, 0.1);
        assert!((u - 0.132_011_134_806_040_21).abs() < 1e-10);
        // The factor 2 in front of the tail keeps the bound away from 0 as δ → 1.
        let limit = bennett_trivial_variance_halfwidth(100, 1.0 - 1e-12);
        assert!((limit - 0.061_138_279_486_524_365).abs() < 1e-10);
        assert!(limit < bennett_trivial_variance_halfwidth(100, 0.5));
    }

    #[test]
    fn l1_radius_golden_and_two_successor_identity() {
        let r = l1_ball_radius(4, 100, 0.1);
        assert!((r - 0.314_376_920_991_643_54).abs() < 1e-14);
        let r2 = l1_ball_radius(2, 100, 0.1);
        assert!((r2 / 2.0 - hoeffding_halfwidth(100, 0.1)).abs() < 1e-15);
        assert!(l1_ball_radius(3, 100, 0.1) < r);
    }

    #[test]
    fn wilson_limit_ratio_golden() {
        assert!((wilson_limit_ratio(0.1) - 2.214_514_255_181_755_8).abs() < 1e-9);
    }

    #[test]
    fn zero_samples() {
        assert_eq!(hoeffding_ci(sc(0, 0), 0.1), Err(CiError::ZeroSamples));
        let ci = CiMethod::ClopperPearson
            .interval_or_trivial(sc(0, 0), 0.1)
            .unwrap();
        assert_eq!((ci.lo, ci.hi), (0.0, 1.0));
        assert!(matches!(
            clopper_pearson_ci(sc(10, 5), 1.0),
            Err(CiError::InvalidDelta(_))
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for m in CiMethod::ALL {
            assert_eq!(m.name().parse::<CiMethod>().unwrap(), m);
        }
        assert!(CiMethod::ClopperPearson.sound_for_smc());
        assert!(!CiMethod::WilsonCc.sound_for_smc());
    }

    proptest! {
        #[test]
        fn intervals_are_well_formed(n in 1u64..2000, frac in 0.0f64..=1.0, delta in 1e-6f64..0.9) {
            let k = ((n as f64) * frac).round() as u64;
            for m in CiMethod::ALL {
                let ci = m.interval(sc(n, k), delta).unwrap();
                prop_assert!(0.0 <= ci.lo && ci.lo <= ci.hi && ci.hi <= 1.0, "{m} {ci:?}");
            }
            let p = k as f64 / n as f64;
            for m in [CiMethod::Hoeffding, CiMethod::ClopperPearson] {
                prop_assert!(m.interval(sc(n, k), delta).unwrap().contains(p));
            }
        }

        #[test]
        fn nesting_in_delta(n in 1u64..500, frac in 0.0f64..=1.0, d1 in 1e-6f64..0.5, f in 1.0f64..1.9) {
            let k = ((n as f64) * frac).round() as u64;
            let d2 = d1 * f;
            for m in CiMethod::ALL {
                let a = m.interval(sc(n, k), d1).unwrap();
                let b = m.interval(sc(n, k), d2).unwrap();
                prop_assert!(a.lo <= b.lo + 1e-12 && a.hi >= b.hi - 1e-12, "{m}");
            }
        }

        #[test]
        fn scenario_never_narrower_than_cp(n in 1u64..300, frac in 0.0f64..=1.0, delta in 1e-4f64..0.5) {
            let k = ((n as f64) * frac).round() as u64;
            let s = scenario_ci(sc(n, k), delta).unwrap();
            let c = clopper_pearson_ci(sc(n, k), delta).unwrap();
            prop_assert!(s.width() >= c.width() - 1e-12);
        }

        #[test]
        fn bennett_at_least_hoeffding(n in 1u64..100_000, delta in 1e-8f64..0.99) {
            prop_assert!(bennett_trivial_variance_halfwidth(n, delta) >= hoeffding_halfwidth(n, delta));
        }
    }
}
