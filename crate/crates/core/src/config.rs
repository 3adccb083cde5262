//! System parameters and the constants derived from them.
//!
//! Transmit power is stored in linear scale with unit noise variance, so
//! `p_bs` doubles as the transmit SNR. Conversion from dB happens at the
//! edges through [`db_to_linear`] and [`linear_to_db`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `a_m^2 + a_n^2 = 1`.
pub const ALLOCATION_SUM_TOL: f64 = 1e-12;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Whether the external eavesdropper `U_e` is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    WithExternalEve,
    NoExternalEve,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::WithExternalEve => "with-eve",
            Mode::NoExternalEve => "no-eve",
        }
    }
}

/// Physical and protocol parameters of the two-user downlink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// BS transmit power, linear.
    pub p_bs: f64,
    /// Near-user power allocation coefficient `a_m^2`.
    pub a_m_sq: f64,
    /// Far-user power allocation coefficient `a_n^2`.
    pub a_n_sq: f64,
    pub d_m: f64,
    pub d_n: f64,
    /// Distance to the external eavesdropper; ignored in [`Mode::NoExternalEve`].
    pub d_e: f64,
    /// Rate of the exponential `|g_i|^2` distribution.
    pub lambda: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Target rate of the near user, bits/s/Hz.
    pub r_m: f64,
    /// Target rate of the far user, bits/s/Hz.
    pub r_n: f64,
    pub mode: Mode,
}

impl SystemConfig {
    /// The reference deployment: `d = (4, 6, 7)` m, `lambda = 1`, `alpha = 4`,
    /// `R_m = R_n = 0.1`, `(a_m^2, a_n^2) = (0.4, 0.6)`, external eavesdropper present.
    pub fn reference(p_bs_db: f64) -> Self {
        SystemConfig {
            p_bs: db_to_linear(p_bs_db),
            a_m_sq: 0.4,
            a_n_sq: 0.6,
            d_m: 4.0,
            d_n: 6.0,
            d_e: 7.0,
            lambda: 1.0,
            alpha: 4.0,
            r_m: 0.1,
            r_n: 0.1,
            mode: Mode::WithExternalEve,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_p_bs_db(mut self, db: f64) -> Self {
        self.p_bs = db_to_linear(db);
        self
    }

    /// Sets `a_m^2` and the complementary `a_n^2 = 1 - a_m^2`.
    pub fn with_near_allocation(mut self, a_m_sq: f64) -> Self {
        self.a_m_sq = a_m_sq;
        self.a_n_sq = 1.0 - a_m_sq;
        self
    }

    pub fn validate(self) -> Result<ValidatedConfig> {
        ValidatedConfig::new(self)
    }
}

/// Quantities shared by the closed forms, the simulator and the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `C_1 = 2^{R_n} - 1`.
    pub c1: f64,
    /// `(1 - 2^{R_n} a_m^2) / (2^{R_n} a_m^2)`, present only when `a_m^2 < 2^{-R_n}`.
    pub delta1: Option<f64>,
    /// `min(a_n^2 / a_m^2, delta1)`, upper limit of the residual SOP integral.
    pub delta_m: Option<f64>,
    /// Far-user decoding threshold on `|g_n|^2` without an external eavesdropper,
    /// present only when `a_n^2 / a_m^2 > C_1`.
    pub tau_n: Option<f64>,
    /// `lambda * d_m^alpha`, rate of the normalized near-user gain.
    pub gain_rate_m: f64,
    pub gain_rate_n: f64,
    pub gain_rate_e: f64,
    /// `d_m^alpha + d_n^alpha`; `lambda * d_min_sum` is the rate of `min(g_m, g_n)`.
    pub d_min_sum: f64,
}

impl DerivedConstants {
    fn compute(cfg: &SystemConfig) -> Self {
        let two_rn = 2f64.powf(cfg.r_n);
        let c1 = two_rn - 1.0;
        let ratio = cfg.a_n_sq / cfg.a_m_sq;

        let delta1 = if cfg.a_m_sq < 1.0 / two_rn {
            Some((1.0 - two_rn * cfg.a_m_sq) / (two_rn * cfg.a_m_sq))
        } else {
            None
        };
        let delta_m = delta1.map(|d| d.min(ratio));
        let tau_n = if ratio > c1 {
            Some(c1 / (cfg.p_bs * (cfg.a_n_sq - c1 * cfg.a_m_sq)))
        } else {
            None
        };

        let pl_m = cfg.d_m.powf(cfg.alpha);
        let pl_n = cfg.d_n.powf(cfg.alpha);
        let pl_e = cfg.d_e.powf(cfg.alpha);
        DerivedConstants {
            c1,
            delta1,
            delta_m,
            tau_n,
            gain_rate_m: cfg.lambda * pl_m,
            gain_rate_n: cfg.lambda * pl_n,
            gain_rate_e: cfg.lambda * pl_e,
            d_min_sum: pl_m + pl_n,
        }
    }
}

/// A [`SystemConfig`] that passed validation, bundled with its [`DerivedConstants`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedConfig {
    config: SystemConfig,
    derived: DerivedConstants,
}

impl ValidatedConfig {
    pub fn new(config: SystemConfig) -> Result<Self> {
        let positive = [
            ("p_bs", config.p_bs),
            ("a_m_sq", config.a_m_sq),
            ("a_n_sq", config.a_n_sq),
            ("d_m", config.d_m),
            ("d_n", config.d_n),
            ("d_e", config.d_e),
            ("lambda", config.lambda),
            ("alpha", config.alpha),
            ("r_m", config.r_m),
            ("r_n", config.r_n),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositive { name, value });
            }
        }
        if config.a_m_sq > config.a_n_sq {
            return Err(Error::AllocationOrder {
                a_m_sq: config.a_m_sq,
                a_n_sq: config.a_n_sq,
            });
        }
        let sum = config.a_m_sq + config.a_n_sq;
        if (sum - 1.0).abs() > ALLOCATION_SUM_TOL {
            return Err(Error::AllocationSum { sum });
        }
        if config.d_m > config.d_n {
            return Err(Error::DistanceOrder {
                d_m: config.d_m,
                d_n: config.d_n,
            });
        }
        Ok(ValidatedConfig {
            config,
            derived: DerivedConstants::compute(&config),
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn derived(&self) -> &DerivedConstants {
        &self.derived
    }

    pub fn mode(&self) -> Mode {
        self.config.mode
    }

    /// `a_m^2 >= 2^{-R_n}`: the far user's message can never be secured
    /// against `U_e`, so the SOP with an external eavesdropper is one.
    pub fn near_allocation_degenerate(&self) -> bool {
        self.derived.delta1.is_none()
    }

    /// `a_n^2 / a_m^2 <= C_1`: the far user can never reach `R_n`, so the
    /// SOP without an external eavesdropper is one.
    pub fn far_ratio_degenerate(&self) -> bool {
        self.derived.tau_n.is_none()
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        ValidatedConfig {
            config: self.config.with_mode(mode),
            derived: self.derived,
        }
    }
}
