//! Closed-form secrecy outage probabilities and ergodic (secrecy) rates.
//!
//! Notation: `k_i = lambda d_i^alpha` is the rate of the normalized gain
//! `|g_i|^2 / d_i^alpha`, `P` the transmit SNR. Every `e^s Ei(-s)` product goes
//! through [`exp_ei`].

use std::f64::consts::LOG2_E;

use crate::config::{Mode, ValidatedConfig};
use crate::error::{Error, Result};
use crate::metric::MetricEstimate;
use crate::quad::QuadratureRule;
use crate::specfun::exp_ei;

fn eei(s: f64) -> f64 {
    exp_ei(s).expect("rate arguments are positive for a validated config")
}

/// `E[log2(1 + c G)]` for `G ~ Exp(rate)`.
fn mean_log2_exponential(rate: f64, c: f64) -> f64 {
    -LOG2_E * eei(rate / c)
}

fn require(cfg: &ValidatedConfig, what: &'static str, expected: Mode) -> Result<()> {
    if cfg.mode() == expected {
        Ok(())
    } else {
        Err(Error::WrongMode { what, expected })
    }
}

/// CDF of the eavesdropper's far-message SINR `X = g_e a_n^2 / (g_e a_m^2 + 1/P)`.
pub fn eavesdropper_sinr_cdf(cfg: &ValidatedConfig, x: f64) -> f64 {
    let c = cfg.config();
    if x <= 0.0 {
        return 0.0;
    }
    if x >= c.a_n_sq / c.a_m_sq {
        return 1.0;
    }
    -(-cfg.derived().gain_rate_e * x / (c.p_bs * (c.a_n_sq - c.a_m_sq * x))).exp_m1()
}

/// Density of `X`, the derivative of [`eavesdropper_sinr_cdf`].
pub fn eavesdropper_sinr_pdf(cfg: &ValidatedConfig, x: f64) -> f64 {
    let c = cfg.config();
    if x < 0.0 || x >= c.a_n_sq / c.a_m_sq {
        return 0.0;
    }
    let k_e = cfg.derived().gain_rate_e;
    let gap = c.a_n_sq - c.a_m_sq * x;
    k_e / c.p_bs * c.a_n_sq / (gap * gap) * (-k_e * x / (c.p_bs * gap)).exp()
}

/// Secrecy outage probability with the external eavesdropper, with the
/// residual integral evaluated by the given Gauss-Chebyshev rule.
pub fn sop_with_eve(cfg: &ValidatedConfig, rule: &QuadratureRule) -> Result<MetricEstimate> {
    require(cfg, "sop_with_eve", Mode::WithExternalEve)?;
    let n = rule.order();
    let delta_m = match cfg.derived().delta_m {
        Some(d) => d,
        None => return Ok(MetricEstimate::analytic(1.0).with_quad_n(n)),
    };
    let c = cfg.config();
    let d = cfg.derived();
    let (k_m, k_n, k_e) = (d.gain_rate_m, d.gain_rate_n, d.gain_rate_e);
    let p = c.p_bs;
    let two_rm = 2f64.powf(c.r_m);
    let two_rn = 2f64.powf(c.r_n);
    let combined = k_n + two_rm * k_m;

    let prefactor = k_e * k_n / (p * combined) * (-k_m * (two_rm - 1.0) / (c.a_m_sq * p)).exp();
    let integrand = |x: f64| {
        let eve_gap = c.a_n_sq - c.a_m_sq * x;
        let far_gap = c.a_n_sq - d.c1 * c.a_m_sq - two_rn * c.a_m_sq * x;
        if far_gap <= 0.0 {
            return 0.0;
        }
        let exponent = k_e * x / (p * eve_gap) + (d.c1 + two_rn * x) * combined / (p * far_gap);
        c.a_n_sq / (eve_gap * eve_gap) * (-exponent).exp()
    };
    let integral = rule.integrate(integrand, 0.0, delta_m)?;
    Ok(MetricEstimate::analytic(1.0 - prefactor * integral)
        .with_quad_n(n)
        .clamp_probability())
}

/// Secrecy outage probability when only the far user eavesdrops.
pub fn sop_no_eve(cfg: &ValidatedConfig) -> Result<MetricEstimate> {
    require(cfg, "sop_no_eve", Mode::NoExternalEve)?;
    let tau_n = match cfg.derived().tau_n {
        Some(t) => t,
        None => return Ok(MetricEstimate::analytic(1.0)),
    };
    let c = cfg.config();
    let d = cfg.derived();
    let two_rm = 2f64.powf(c.r_m);
    let combined = d.gain_rate_n + two_rm * d.gain_rate_m;
    let exponent = d.gain_rate_m * (two_rm - 1.0) / (c.a_m_sq * c.p_bs) + tau_n * combined;
    let success = d.gain_rate_n / combined * (-exponent).exp();
    Ok(MetricEstimate::analytic(1.0 - success).clamp_probability())
}

/// `E[R_m^a]`, the near user's ergodic rate after SIC.
pub fn achievable_near(cfg: &ValidatedConfig) -> f64 {
    let c = cfg.config();
    mean_log2_exponential(cfg.derived().gain_rate_m, c.a_m_sq * c.p_bs)
}

/// `E[R_m^L]`: leakage of the near user's message to the strongest of `U_n`
/// and (when present) `U_e`.
pub fn leakage_near(cfg: &ValidatedConfig) -> f64 {
    let c = cfg.config();
    let d = cfg.derived();
    let snr = c.a_m_sq * c.p_bs;
    match cfg.mode() {
        Mode::NoExternalEve => mean_log2_exponential(d.gain_rate_n, snr),
        // max(g_n, g_e) has density f_n + f_e - f_{rate n + rate e}.
        Mode::WithExternalEve => {
            -LOG2_E
                * (eei(d.gain_rate_n / snr) + eei(d.gain_rate_e / snr)
                    - eei((d.gain_rate_n + d.gain_rate_e) / snr))
        }
    }
}

/// `E[R_n^L]`: leakage of the far user's message to `U_e`.
pub fn leakage_far(cfg: &ValidatedConfig) -> f64 {
    let c = cfg.config();
    let k_e = cfg.derived().gain_rate_e;
    -LOG2_E * (eei(k_e / c.p_bs) - eei(k_e / (c.a_m_sq * c.p_bs)))
}

/// Ergodic secrecy rate of the near user; the eavesdropper set follows the config mode.
pub fn erg_secrecy_rate_near(cfg: &ValidatedConfig) -> MetricEstimate {
    MetricEstimate::analytic(achievable_near(cfg) - leakage_near(cfg))
}

/// Ergodic rate of the far user, limited by the weaker of its own link and the near user's SIC stage.
pub fn erg_rate_far(cfg: &ValidatedConfig) -> MetricEstimate {
    let c = cfg.config();
    let rate_min = c.lambda * cfg.derived().d_min_sum;
    let value = -LOG2_E * (eei(rate_min / c.p_bs) - eei(rate_min / (c.a_m_sq * c.p_bs)));
    MetricEstimate::analytic(value)
}

/// Ergodic secrecy rate of the far user against `U_e`. Not clamped at zero.
pub fn erg_secrecy_rate_far(cfg: &ValidatedConfig) -> Result<MetricEstimate> {
    require(cfg, "erg_secrecy_rate_far", Mode::WithExternalEve)?;
    Ok(MetricEstimate::analytic(
        erg_rate_far(cfg).value - leakage_far(cfg),
    ))
}
