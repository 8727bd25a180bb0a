//! Regularized incomplete beta function, its inverse and the normal quantile.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const TINY: f64 = 1e-300;
const CF_EPS: f64 = 1e-15;
const CF_MAX_ITER: usize = 200_000;
const INVERSE_MAX_ITER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument {name} = {value} outside its domain")]
    Domain { name: &'static str, value: f64 },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

fn domain(name: &'static str, value: f64) -> SpecialError {
    SpecialError::Domain { name, value }
}

/// Stirling-series error `ln Γ(x+1) − (x+½)ln x + x − ln√(2π)`.
fn stirlerr(x: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if x <= 15.0 {
        return ln_gamma(x + 1.0) - (x + 0.5) * x.ln() + x - LN_SQRT_2PI;
    }
    let xx = x * x;
    if x > 500.0 {
        (S0 - S1 / xx) / x
    } else if x > 80.0 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if x > 35.0 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x/np) + np − x`, evaluated without cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        let mut j = 1.0;
        loop {
            ej *= v2;
            let s1 = s + ej / (2.0 * j + 1.0);
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1.0;
        }
    }
    x * (x / np).ln() + np - x
}

/// Binomial-style density `Γ(n+1)/(Γ(x+1)Γ(n−x+1)) pˣ qⁿ⁻ˣ` for real `x`, `n`.
fn dbinom_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    if x == 0.0 {
        let lc = if p < 0.1 {
            -bd0(n, n * q) - n * p
        } else {
            n * q.ln()
        };
        return lc.exp();
    }
    if x == n {
        let lc = if q < 0.1 {
            -bd0(n, n * p) - n * q
        } else {
            n * p.ln()
        };
        return lc.exp();
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = std::f64::consts::LN_2 + std::f64::consts::PI.ln() + x.ln() + (-x / n).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// `xᵃ yᵇ / B(a,b)` with `y = 1 − x`.
fn power_terms(x: f64, y: f64, a: f64, b: f64) -> f64 {
    dbinom_raw(a, a + b, x, y) * a * b / (a + b)
}

/// Continued fraction of the incomplete beta function (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(SpecialError::NoConvergence(
        "incomplete beta continued fraction",
    ))
}

/// Both tails `(I_x(a,b), 1 − I_x(a,b))`, each computed without cancellation.
pub fn incomplete_beta_tails(x: f64, a: f64, b: f64) -> Result<(f64, f64), SpecialError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain("a", a));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(domain("b", b));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == 1.0 {
        return Ok((1.0, 0.0));
    }
    let y = 1.0 - x;
    if x < (a + 1.0) / (a + b + 2.0) {
        let p = power_terms(x, y, a, b) * beta_cf(x, a, b)? / a;
        let p = p.clamp(0.0, 1.0);
        Ok((p, 1.0 - p))
    } else {
        let q = power_terms(y, x, b, a) * beta_cf(y, b, a)? / b;
        let q = q.clamp(0.0, 1.0);
        Ok((1.0 - q, q))
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    incomplete_beta_tails(x, a, b).map(|t| t.0)
}

/// Beta density at `x`.
fn beta_density(x: f64, a: f64, b: f64) -> f64 {
    let y = 1.0 - x;
    power_terms(x, y, a, b) / (x * y)
}

/// Inverse of `x ↦ I_x(a, b)`: safeguarded Newton iteration inside a shrinking bracket.
pub fn inverse_regularized_beta(q: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(domain("q", q));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain("a", a));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(domain("b", b));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    // Work with whichever tail is small to keep relative accuracy.
    let lower_tail = q <= 0.5;
    let target = if lower_tail { q } else { 1.0 - q };
    // Residual with the sign of I_x(a,b) − q.
    let residual = |x: f64| -> Result<f64, SpecialError> {
        let (p, c) = incomplete_beta_tails(x, a, b)?;
        Ok(if lower_tail { p - target } else { target - c })
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut x = initial_guess(q, a, b).clamp(1e-300, 1.0 - 1e-16);
    for _ in 0..INVERSE_MAX_ITER {
        let r = residual(x)?;
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let dens = beta_density(x, a, b);
        let mut next = if dens > 0.0 && dens.is_finite() {
            x - r / dens
        } else {
            f64::NAN
        };
        if !(next > lo && next < hi) {
            next = if lo > 0.0 && hi / lo > 1e3 {
                (lo * hi).sqrt()
            } else if lo == 0.0 && hi < 1e-3 {
                hi * 1e-3
            } else {
                0.5 * (lo + hi)
            };
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || hi - lo <= 4.0 * f64::EPSILON * hi
        {
            return Ok(next);
        }
        x = next;
    }
    Err(SpecialError::NoConvergence("inverse incomplete beta"))
}

fn initial_guess(q: f64, a: f64, b: f64) -> f64 {
    // Normal approximation of the beta distribution, clipped to the unit interval.
    let mean = a / (a + b);
    let var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    let z = normal_quantile(q);
    let x = mean + z * var.sqrt();
    if x <= 0.0 {
        // Left tail dominated by x^a behaviour.
        ((q.ln() + a.ln() + beta_fn_ln(a, b)) / a).exp().min(mean)
    } else if x >= 1.0 {
        1.0 - (((1.0 - q).ln() + b.ln() + beta_fn_ln(a, b)) / b)
            .exp()
            .min(1.0 - mean)
    } else {
        x
    }
}

fn beta_fn_ln(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Quantile of the standard normal distribution.
///
/// Rational approximation refined by one Newton step on the complementary error function.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    // Newton step on Φ(x) − p with Φ(x) = erfc(−x/√2)/2.
    let e = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2) - p;
    x - e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp()
}
