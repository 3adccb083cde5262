//! Brute-force numeric integration of the outage and rate integrals.
//!
//! Nothing here uses the closed forms or the Gauss-Chebyshev rule. The
//! outage probabilities are integrated over the raw gains `(g_e, g_n)` with
//! the thresholds solved straight from the success events; only the innermost
//! `g_m` integral is replaced by the exponential survival function. Ergodic
//! rates integrate `log2(1 + c x)` against the density of the relevant gain.
//! Integration is adaptive Gauss-Kronrod (7/15) with interval bisection.

use std::f64::consts::LOG2_E;

use crate::config::{Mode, ValidatedConfig};
use crate::error::{Error, Result};
use crate::mc::ErgodicMetric;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
    /// Neglected tail mass of semi-infinite exponential integrals.
    pub truncation_mass: f64,
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        IntegrationSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 60,
            truncation_mass: 1e-14,
        }
    }
}

impl IntegrationSpec {
    /// Length (in units of `1 / rate`) beyond which an exponential tail holds less than `truncation_mass`.
    fn tail_length(&self, rate: f64) -> f64 {
        -self.truncation_mass.ln() / rate
    }
}

#[allow(clippy::excessive_precision)]
// Kronrod 15-point nodes and weights on [-1, 1] (non-negative half); odd indices are Gauss 7 nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod estimate and `|K15 - G7|` on `[a, b]`.
fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// The total error budget `max(abs_tol, rel_tol |I|)` is distributed over the
/// interval in proportion to panel width.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &IntegrationSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Interval { lo: a, hi: b });
    }
    if a == b {
        return Ok(0.0);
    }
    const INITIAL_PANELS: usize = 16;
    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels = Vec::with_capacity(INITIAL_PANELS);
    let mut coarse = 0.0;
    for i in 0..INITIAL_PANELS {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == INITIAL_PANELS {
            b
        } else {
            lo + width
        };
        let (val, err) = gauss_kronrod(&f, lo, hi)?;
        coarse += val;
        panels.push((lo, hi, val, err));
    }
    let budget = spec.abs_tol.max(spec.rel_tol * coarse.abs()) / (b - a);
    let mut total = 0.0;
    for (lo, hi, val, err) in panels {
        total += refine(&f, lo, hi, val, err, budget, 0, spec)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: f64,
    b: f64,
    val: f64,
    err: f64,
    budget_per_width: f64,
    depth: usize,
    spec: &IntegrationSpec,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if err <= budget_per_width * (b - a) {
        return Ok(val);
    }
    let mid = 0.5 * (a + b);
    if depth >= spec.max_depth || mid <= a || mid >= b {
        return Err(Error::Tolerance {
            max_depth: spec.max_depth,
            at: mid,
        });
    }
    let (lv, le) = gauss_kronrod(f, a, mid)?;
    let (rv, re) = gauss_kronrod(f, mid, b)?;
    Ok(
        refine(f, a, mid, lv, le, budget_per_width, depth + 1, spec)?
            + refine(f, mid, b, rv, re, budget_per_width, depth + 1, spec)?,
    )
}

/// Event thresholds written directly from the success conditions.
struct Thresholds<'a> {
    cfg: &'a ValidatedConfig,
    two_rm: f64,
    two_rn: f64,
}

impl<'a> Thresholds<'a> {
    fn new(cfg: &'a ValidatedConfig) -> Self {
        let c = cfg.config();
        Thresholds {
            cfg,
            two_rm: 2f64.powf(c.r_m),
            two_rn: 2f64.powf(c.r_n),
        }
    }

    fn far_sinr(&self, g: f64) -> f64 {
        let c = self.cfg.config();
        g * c.a_n_sq / (g * c.a_m_sq + 1.0 / c.p_bs)
    }

    /// Smallest gain whose far-message SINR reaches `target`; infinite if unreachable.
    fn gain_for_far_sinr(&self, target: f64) -> f64 {
        let c = self.cfg.config();
        let gap = c.a_n_sq - target * c.a_m_sq;
        if gap <= 0.0 {
            f64::INFINITY
        } else {
            target / (c.p_bs * gap)
        }
    }

    /// Far-message SINR a legitimate receiver needs to beat `U_e` (gain `g_e`) by `R_n`.
    fn far_target(&self, g_e: f64) -> f64 {
        self.two_rn * (1.0 + self.far_sinr(g_e)) - 1.0
    }

    /// Smallest `g_m` that beats a receiver with gain `g` on `S_m` by `R_m`.
    fn near_gain_over(&self, g: f64) -> f64 {
        let c = self.cfg.config();
        let snr = c.a_m_sq * c.p_bs;
        (self.two_rm * (1.0 + snr * g) - 1.0) / snr
    }

    /// `Pr(g_m >= max(thresholds) | g_n, g_e)`.
    fn near_success_given(&self, g_n: f64, g_e: f64) -> f64 {
        let e1 = self.gain_for_far_sinr(self.far_target(g_e));
        let e2 = self.near_gain_over(g_n).max(self.near_gain_over(g_e));
        (-self.cfg.derived().gain_rate_m * e1.max(e2)).exp()
    }

    /// `Pr(E1, E2, E3 | g_e)`, integrating `g_n` over the region where `E3` holds.
    fn success_given_eve(&self, g_e: f64, spec: &IntegrationSpec) -> Result<f64> {
        let k_n = self.cfg.derived().gain_rate_n;
        let g_n_min = self.gain_for_far_sinr(self.far_target(g_e));
        if !g_n_min.is_finite() {
            return Ok(0.0);
        }
        integrate(
            |g_n| Ok(k_n * (-k_n * g_n).exp() * self.near_success_given(g_n, g_e)),
            g_n_min,
            g_n_min + spec.tail_length(k_n),
            spec,
        )
    }
}

/// SOP without `U_e` from the double integral over `(g_n, g_m)`.
pub fn oracle_sop_no_eve(cfg: &ValidatedConfig, spec: &IntegrationSpec) -> Result<f64> {
    if cfg.far_ratio_degenerate() {
        return Err(Error::Precondition("a_n^2 / a_m^2 must exceed 2^R_n - 1"));
    }
    let t = Thresholds::new(cfg);
    Ok(1.0 - t.success_given_eve(0.0, spec)?)
}

/// SOP with `U_e` from the triple integral over `(g_e, g_n, g_m)`.
pub fn oracle_sop_with_eve(cfg: &ValidatedConfig, spec: &IntegrationSpec) -> Result<f64> {
    if cfg.near_allocation_degenerate() {
        return Err(Error::Precondition("a_m^2 must be below 2^-R_n"));
    }
    let c = cfg.config();
    let k_e = cfg.derived().gain_rate_e;
    let t = Thresholds::new(cfg);
    // E3 is feasible only while the required SINR stays below a_n^2 / a_m^2.
    let sinr_cap = (c.a_n_sq / c.a_m_sq + 1.0) / t.two_rn - 1.0;
    let g_e_max = if sinr_cap <= 0.0 {
        0.0
    } else {
        t.gain_for_far_sinr(sinr_cap).min(spec.tail_length(k_e))
    };
    let success = integrate(
        |g_e| Ok(k_e * (-k_e * g_e).exp() * t.success_given_eve(g_e, spec)?),
        0.0,
        g_e_max,
        spec,
    )?;
    Ok(1.0 - success)
}

/// `E[h(G)]` for a density `pdf` whose tail decays at least like `exp(-slowest_rate x)`.
fn expectation<H, P>(h: H, pdf: P, slowest_rate: f64, spec: &IntegrationSpec) -> Result<f64>
where
    H: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    let upper = spec.tail_length(slowest_rate);
    integrate(|x| Ok(h(x) * pdf(x)), 0.0, upper, spec)
}

fn exponential_pdf(rate: f64) -> impl Fn(f64) -> f64 {
    move |x| rate * (-rate * x).exp()
}

/// Ergodic (secrecy) rate by direct integration against the gain densities.
pub fn oracle_ergodic(
    cfg: &ValidatedConfig,
    metric: ErgodicMetric,
    spec: &IntegrationSpec,
) -> Result<f64> {
    let c = cfg.config();
    let d = cfg.derived();
    let snr_m = c.a_m_sq * c.p_bs;
    let near_rate = |x: f64| (snr_m * x).ln_1p() * LOG2_E;
    let far_rate = |x: f64| (x * c.a_n_sq / (x * c.a_m_sq + 1.0 / c.p_bs)).ln_1p() * LOG2_E;
    match metric {
        ErgodicMetric::NearSecrecy => {
            let achievable = expectation(
                near_rate,
                exponential_pdf(d.gain_rate_m),
                d.gain_rate_m,
                spec,
            )?;
            let leakage = match cfg.mode() {
                Mode::NoExternalEve => expectation(
                    near_rate,
                    exponential_pdf(d.gain_rate_n),
                    d.gain_rate_n,
                    spec,
                )?,
                Mode::WithExternalEve => {
                    let (k_n, k_e) = (d.gain_rate_n, d.gain_rate_e);
                    // derivative of (1 - e^{-k_n x})(1 - e^{-k_e x})
                    let pdf_max = move |x: f64| {
                        k_n * (-k_n * x).exp() * -(-k_e * x).exp_m1()
                            + k_e * (-k_e * x).exp() * -(-k_n * x).exp_m1()
                    };
                    expectation(near_rate, pdf_max, k_n.min(k_e), spec)?
                }
            };
            Ok(achievable - leakage)
        }
        ErgodicMetric::FarRate | ErgodicMetric::FarSecrecy => {
            // min(g_m, g_n) is exponential with the summed rate.
            let rate_min = d.gain_rate_m + d.gain_rate_n;
            let achievable = expectation(far_rate, exponential_pdf(rate_min), rate_min, spec)?;
            if metric == ErgodicMetric::FarRate {
                return Ok(achievable);
            }
            if cfg.mode() != Mode::WithExternalEve {
                return Err(Error::WrongMode {
                    what: "far-user secrecy rate",
                    expected: Mode::WithExternalEve,
                });
            }
            let leakage = expectation(
                far_rate,
                exponential_pdf(d.gain_rate_e),
                d.gain_rate_e,
                spec,
            )?;
            Ok(achievable - leakage)
        }
    }
}
