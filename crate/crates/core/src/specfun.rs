//! Exponential integral on the negative real axis.
//!
//! Every ergodic-rate closed form is a signed sum of `e^s Ei(-s)` terms with
//! `s = lambda d^alpha / (a P)`. At the reference deployment `s` ranges from
//! about `1e-3` to well over `1e3`, where `e^s` alone overflows, so the fused
//! [`exp_ei`] is the entry point the rest of the crate uses.
//!
//! Internally everything is phrased through `E1(s) = -Ei(-s)`:
//!
//! * `s <= 1`: the convergent power series `E1(s) = -gamma - ln s - sum (-s)^k / (k k!)`.
//! * `1 < s < 40`: a continued fraction for `e^s E1(s)` evaluated with the
//!   modified Lentz method.
//! * `s >= 40`: the asymptotic series `e^s E1(s) ~ (1/s) sum (-1)^k k! / s^k`,
//!   truncated at its smallest term.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 1.0;
const ASYMPTOTIC_MIN: f64 = 40.0;
const EPS: f64 = f64::EPSILON;

/// `Ei(x)` for `x < 0`.
///
/// Absolute error is below `1e-12` on `[-700, 0)`. Results underflow to
/// `-0.0` once `x < -745`.
pub fn ei(x: f64) -> Result<f64> {
    if !(x.is_finite() && x < 0.0) {
        return Err(Error::Domain(x));
    }
    let s = -x;
    if s <= SERIES_MAX {
        Ok(-e1_series(s))
    } else {
        Ok(-(-s).exp() * exp_e1_large(s))
    }
}

/// `e^s Ei(-s)` for `s > 0`, without forming `e^s` for large `s`.
///
/// Tends to `-1/s` as `s` grows; `+inf` maps to `-0.0`.
pub fn exp_ei(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Domain(s));
    }
    if s == f64::INFINITY {
        return Ok(-0.0);
    }
    if s <= SERIES_MAX {
        Ok(-s.exp() * e1_series(s))
    } else {
        Ok(-exp_e1_large(s))
    }
}

fn exp_e1_large(s: f64) -> f64 {
    if s < ASYMPTOTIC_MIN {
        exp_e1_continued_fraction(s)
    } else {
        exp_e1_asymptotic(s)
    }
}

/// `E1(s)` by its power series; accurate for small `s`.
pub(crate) fn e1_series(s: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -s / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - s.ln() - sum
}

/// `e^s E1(s)` by the continued fraction
/// `1/(s+1- 1/(s+3- 4/(s+5- ...)))`, modified Lentz evaluation.
pub(crate) fn exp_e1_continued_fraction(s: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = s + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `e^s E1(s)` by the asymptotic series, stopped at the smallest term.
pub(crate) fn exp_e1_asymptotic(s: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..200 {
        let next = -term * (k as f64) / s;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    sum / s
}
