//! Seeded Monte-Carlo estimates built from per-draw event indicators and rates.
//!
//! Draw `i` of stream `(seed, stream_id)` always consumes the same six 32-bit
//! words of a ChaCha8 keystream, at word offset `6 i`. Work is split into
//! fixed-size chunks whose partial sums are merged by a fixed pairwise tree,
//! so results are bit-identical for any rayon pool size.

use std::str::FromStr;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Mode, ValidatedConfig};
use crate::error::{Error, Result};
use crate::metric::MetricEstimate;

/// Draws per chunk; part of the reproducibility contract.
pub const CHUNK_SIZE: u64 = 1 << 15;
const WORDS_PER_SAMPLE: u128 = 6;

/// One draw of the normalized channel power gains `|g_i|^2 / d_i^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelSample {
    pub g_m: f64,
    pub g_n: f64,
    /// Always zero without an external eavesdropper.
    pub g_e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngSpec { seed, stream_id }
    }

    /// Generator positioned at draw `index`.
    pub fn rng_at(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos(index as u128 * WORDS_PER_SAMPLE);
        rng
    }
}

/// Uniform on `(0, 1]` from the top 53 bits.
fn unit_open_closed<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws one [`ChannelSample`] by inverse-CDF sampling, `x = -ln(u) / rate`.
///
/// Three uniforms are consumed in every mode so that draw positions do not depend on the mode.
pub fn sample_channels<R: RngCore>(cfg: &ValidatedConfig, rng: &mut R) -> ChannelSample {
    let d = cfg.derived();
    let g_m = -unit_open_closed(rng).ln() / d.gain_rate_m;
    let g_n = -unit_open_closed(rng).ln() / d.gain_rate_n;
    let u_e = unit_open_closed(rng);
    let g_e = match cfg.mode() {
        Mode::WithExternalEve => -u_e.ln() / d.gain_rate_e,
        Mode::NoExternalEve => 0.0,
    };
    ChannelSample { g_m, g_n, g_e }
}

/// Non-outage indicators for one draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OutageEvents {
    /// `U_m` decodes `S_n` with secrecy margin `R_n` over `U_e`.
    pub e1: bool,
    /// `U_m` decodes `S_m` with margin `R_m` over both `U_n` and `U_e`.
    pub e2: bool,
    /// `U_n` decodes `S_n` with margin `R_n` over `U_e`.
    pub e3: bool,
    /// The complementary `g_n < g_e` branch of the success event; never occurs.
    pub r4_event: bool,
}

impl OutageEvents {
    pub fn success(&self) -> bool {
        self.e1 && self.e2 && self.e3
    }
}

/// SINR of the far user's message at a receiver with gain `g`, treating `S_m` as noise.
fn far_message_sinr(cfg: &ValidatedConfig, g: f64) -> f64 {
    let c = cfg.config();
    g * c.a_n_sq / (g * c.a_m_sq + 1.0 / c.p_bs)
}

/// Evaluates the success events. Without an external eavesdropper `g_e = 0`,
/// which reduces every eavesdropper rate to zero.
pub fn outage_event(cfg: &ValidatedConfig, s: &ChannelSample) -> OutageEvents {
    let c = cfg.config();
    let snr_m = c.a_m_sq * c.p_bs;
    let far_eve = (1.0 + far_message_sinr(cfg, s.g_e)).log2();
    let near_at_m = (1.0 + s.g_m * snr_m).log2();
    let near_at_n = (1.0 + s.g_n * snr_m).log2();
    let near_at_e = (1.0 + s.g_e * snr_m).log2();

    let e1 = (1.0 + far_message_sinr(cfg, s.g_m)).log2() - far_eve >= c.r_n;
    let e2 = near_at_m - near_at_n >= c.r_m && near_at_m - near_at_e >= c.r_m;
    let e3 = (1.0 + far_message_sinr(cfg, s.g_n)).log2() - far_eve >= c.r_n;

    let two_rn = 2f64.powf(c.r_n);
    let r4_event = 1.0 + s.g_m * snr_m >= two_rn * (1.0 + s.g_e * snr_m)
        && s.g_n < s.g_e
        && 1.0 + far_message_sinr(cfg, s.g_n) >= two_rn * (1.0 + far_message_sinr(cfg, s.g_e));

    OutageEvents {
        e1,
        e2,
        e3,
        r4_event,
    }
}

/// Ergodic quantities estimable by simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErgodicMetric {
    NearSecrecy,
    FarSecrecy,
    FarRate,
}

impl FromStr for ErgodicMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "near-secrecy" => Ok(ErgodicMetric::NearSecrecy),
            "far-secrecy" => Ok(ErgodicMetric::FarSecrecy),
            "far-rate" => Ok(ErgodicMetric::FarRate),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }
}

/// Per-draw rate whose mean is the requested ergodic metric. Secrecy rates are not clamped.
pub fn sample_rate(cfg: &ValidatedConfig, metric: ErgodicMetric, s: &ChannelSample) -> f64 {
    let c = cfg.config();
    match metric {
        ErgodicMetric::NearSecrecy => {
            let snr = c.a_m_sq * c.p_bs;
            (1.0 + s.g_m * snr).log2() - (1.0 + snr * s.g_n.max(s.g_e)).log2()
        }
        ErgodicMetric::FarRate => (1.0 + far_message_sinr(cfg, s.g_m.min(s.g_n))).log2(),
        ErgodicMetric::FarSecrecy => {
            (1.0 + far_message_sinr(cfg, s.g_m.min(s.g_n))).log2()
                - (1.0 + far_message_sinr(cfg, s.g_e)).log2()
        }
    }
}

/// Count, mean and sum of squared deviations of a batch of draws.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        let mean = a.mean + delta * (b.n as f64 / n as f64);
        let m2 = a.m2 + b.m2 + delta * delta * (a.n as f64 * b.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }
}

/// Fixed-shape pairwise reduction; the result depends only on `items` and their order.
fn pairwise<T: Copy>(items: &[T], merge: &impl Fn(T, T) -> T, empty: T) -> T {
    match items.len() {
        0 => empty,
        1 => items[0],
        len => {
            let (lo, hi) = items.split_at(len / 2);
            merge(pairwise(lo, merge, empty), pairwise(hi, merge, empty))
        }
    }
}

/// Runs `per_draw` over draws `0..iters` in chunks and returns the per-chunk results in chunk order.
fn map_chunks<T, F>(cfg: &ValidatedConfig, iters: u64, rng: RngSpec, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut dyn Iterator<Item = ChannelSample>) -> T + Sync,
{
    let chunks = iters.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK_SIZE;
            let len = CHUNK_SIZE.min(iters - start);
            let mut gen = rng.rng_at(start);
            let mut draws = (0..len).map(|_| sample_channels(cfg, &mut gen));
            per_chunk(&mut draws)
        })
        .collect()
}

/// `1 - Pr(E1 and E2 and E3)` with binomial standard error.
pub fn mc_sop(cfg: &ValidatedConfig, iters: u64, rng: RngSpec) -> Result<MetricEstimate> {
    if iters == 0 {
        return Err(Error::ZeroIterations);
    }
    let counts = map_chunks(cfg, iters, rng, |draws| {
        draws.filter(|s| outage_event(cfg, s).success()).count() as u64
    });
    let successes: u64 = counts.iter().sum();
    let p_success = successes as f64 / iters as f64;
    let std_err = (p_success * (1.0 - p_success) / iters as f64).sqrt();
    Ok(MetricEstimate::monte_carlo(
        1.0 - p_success,
        std_err,
        iters,
        rng.seed,
        rng.stream_id,
    ))
}

/// Sample mean of the per-draw rate with the standard error of the mean.
pub fn mc_ergodic(
    cfg: &ValidatedConfig,
    metric: ErgodicMetric,
    iters: u64,
    rng: RngSpec,
) -> Result<MetricEstimate> {
    if iters == 0 {
        return Err(Error::ZeroIterations);
    }
    if metric == ErgodicMetric::FarSecrecy && cfg.mode() != Mode::WithExternalEve {
        return Err(Error::WrongMode {
            what: "far-user secrecy rate",
            expected: Mode::WithExternalEve,
        });
    }
    let parts = map_chunks(cfg, iters, rng, |draws| {
        let mut m = Moments::default();
        for s in draws {
            m.push(sample_rate(cfg, metric, &s));
        }
        m
    });
    let total = pairwise(&parts, &Moments::merge, Moments::default());
    let variance = if total.n > 1 {
        total.m2 / (total.n - 1) as f64
    } else {
        0.0
    };
    Ok(MetricEstimate::monte_carlo(
        total.mean,
        (variance / total.n as f64).sqrt(),
        iters,
        rng.seed,
        rng.stream_id,
    ))
}

/// Collects `iters` draws of stream `rng` sequentially. Intended for diagnostics and tests.
pub fn draw_samples(cfg: &ValidatedConfig, iters: u64, rng: RngSpec) -> Vec<ChannelSample> {
    map_chunks(cfg, iters, rng, |draws| draws.collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SystemConfig;

    fn cfg(db: f64, mode: Mode) -> ValidatedConfig {
        SystemConfig::reference(db)
            .with_mode(mode)
            .validate()
            .unwrap()
    }

    #[test]
    fn draws_are_position_addressed() {
        let c = cfg(30.0, Mode::WithExternalEve);
        let spec = RngSpec::new(7, 3);
        let all = draw_samples(&c, 100, spec);
        let mut gen = spec.rng_at(57);
        assert_eq!(sample_channels(&c, &mut gen), all[57]);
        assert_eq!(sample_channels(&c, &mut gen), all[58]);
        let other = draw_samples(&c, 100, RngSpec::new(7, 4));
        assert_ne!(all[0], other[0]);
    }

    #[test]
    fn no_eve_draws_share_positions_with_eve_draws() {
        let spec = RngSpec::new(1, 0);
        let with = draw_samples(&cfg(30.0, Mode::WithExternalEve), 50, spec);
        let without = draw_samples(&cfg(30.0, Mode::NoExternalEve), 50, spec);
        for (a, b) in with.iter().zip(&without) {
            assert_eq!(a.g_m, b.g_m);
            assert_eq!(a.g_n, b.g_n);
            assert_eq!(b.g_e, 0.0);
        }
    }

    #[test]
    fn sample_moments_match_exponential_law() {
        let c = cfg(30.0, Mode::WithExternalEve);
        let draws = draw_samples(&c, 1_000_000, RngSpec::new(11, 0));
        let mean_m = draws.iter().map(|s| s.g_m).sum::<f64>() / draws.len() as f64;
        assert!((mean_m / (1.0 / 256.0) - 1.0).abs() < 0.01, "{mean_m}");
        let below =
            draws.iter().filter(|s| s.g_n <= 1.0 / 1296.0).count() as f64 / draws.len() as f64;
        let expected = 1.0 - (-1f64).exp();
        assert!((below / expected - 1.0).abs() < 0.005, "{below}");
    }

    #[test]
    fn identical_gains_fail_every_event() {
        let c = cfg(30.0, Mode::WithExternalEve);
        let s = ChannelSample {
            g_m: 0.01,
            g_n: 0.01,
            g_e: 0.01,
        };
        let ev = outage_event(&c, &s);
        assert!(!ev.e1 && !ev.e2 && !ev.e3 && !ev.r4_event);
    }

    #[test]
    fn zero_iterations_rejected() {
        let c = cfg(30.0, Mode::WithExternalEve);
        assert_eq!(
            mc_sop(&c, 0, RngSpec::new(0, 0)),
            Err(Error::ZeroIterations)
        );
        assert_eq!(
            mc_ergodic(&c, ErgodicMetric::FarRate, 0, RngSpec::new(0, 0)),
            Err(Error::ZeroIterations)
        );
        assert!(matches!(
            mc_ergodic(
                &cfg(30.0, Mode::NoExternalEve),
                ErgodicMetric::FarSecrecy,
                10,
                RngSpec::new(0, 0)
            ),
            Err(Error::WrongMode { .. })
        ));
        assert!(matches!(
            "bogus".parse::<ErgodicMetric>(),
            Err(Error::UnknownMetric(_))
        ));
    }

    #[test]
    fn vanishing_snr_means_certain_outage() {
        let c = cfg(-60.0, Mode::WithExternalEve);
        let e = mc_sop(&c, 100_000, RngSpec::new(5, 0)).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn degenerate_allocation_always_outage() {
        let mut sc = SystemConfig::reference(30.0).with_near_allocation(0.5);
        sc.r_n = 1.0;
        let c = sc.validate().unwrap();
        let e = mc_sop(&c, 200_000, RngSpec::new(5, 0)).unwrap();
        assert!((e.value - 1.0).abs() <= 3.0 * e.std_err.unwrap());
    }

    #[test]
    fn symmetric_near_secrecy_is_zero_mean() {
        let mut sc = SystemConfig::reference(30.0).with_mode(Mode::NoExternalEve);
        sc.d_n = sc.d_m;
        let c = sc.validate().unwrap();
        let e = mc_ergodic(&c, ErgodicMetric::NearSecrecy, 200_000, RngSpec::new(9, 0)).unwrap();
        assert!(e.value.abs() <= 3.0 * e.std_err.unwrap(), "{:?}", e);
    }

    #[test]
    fn std_err_shrinks_as_inverse_sqrt() {
        let c = cfg(30.0, Mode::WithExternalEve);
        let a = mc_ergodic(&c, ErgodicMetric::NearSecrecy, 100_000, RngSpec::new(2, 0)).unwrap();
        let b = mc_ergodic(&c, ErgodicMetric::NearSecrecy, 400_000, RngSpec::new(2, 1)).unwrap();
        let ratio = a.std_err.unwrap() / b.std_err.unwrap();
        assert!((ratio / 2.0 - 1.0).abs() < 0.2, "{ratio}");
        let a = mc_sop(&c, 100_000, RngSpec::new(2, 0)).unwrap();
        let b = mc_sop(&c, 400_000, RngSpec::new(2, 1)).unwrap();
        let ratio = a.std_err.unwrap() / b.std_err.unwrap();
        assert!((ratio / 2.0 - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn results_do_not_depend_on_pool_size() {
        let c = cfg(30.0, Mode::WithExternalEve);
        let spec = RngSpec::new(42, 5);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    (
                        mc_sop(&c, 300_001, spec).unwrap(),
                        mc_ergodic(&c, ErgodicMetric::NearSecrecy, 300_001, spec).unwrap(),
                    )
                })
        };
        let (s1, e1) = run(1);
        let (s4, e4) = run(4);
        assert_eq!(s1.value.to_bits(), s4.value.to_bits());
        assert_eq!(e1.value.to_bits(), e4.value.to_bits());
        assert_eq!(e1.std_err.unwrap().to_bits(), e4.std_err.unwrap().to_bits());
    }

    #[test]
    fn pairwise_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let parts: Vec<Moments> = xs
            .chunks(77)
            .map(|c| {
                let mut m = Moments::default();
                c.iter().for_each(|&x| m.push(x));
                m
            })
            .collect();
        let merged = pairwise(&parts, &Moments::merge, Moments::default());
        assert_eq!(merged.n, whole.n);
        assert!((merged.mean - whole.mean).abs() < 1e-14);
        assert!((merged.m2 - whole.m2).abs() < 1e-10);
    }
}
