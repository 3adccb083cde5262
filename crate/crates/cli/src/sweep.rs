//! Parameter sweeps and single-metric evaluation.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use nomasec_core::analytic::{
    erg_rate_far, erg_secrecy_rate_far, erg_secrecy_rate_near, sop_no_eve, sop_with_eve,
};
use nomasec_core::mc::{mc_ergodic, mc_sop};
use nomasec_core::oracle::{oracle_ergodic, oracle_sop_no_eve, oracle_sop_with_eve};
use nomasec_core::{
    ErgodicMetric, IntegrationSpec, Method, Metric, MetricEstimate, Mode, QuadratureRule, RngSpec,
    SystemConfig, ValidatedConfig,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "axis,axis_value,metric,method,value,std_err,detail";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Transmit SNR in dB.
    PbsDb,
    /// Near-user power share; the far user gets the rest.
    AmSq,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::PbsDb => "pbs-db",
            Axis::AmSq => "am2",
        }
    }

    /// `base` with the swept parameter set to `value`.
    pub fn apply(self, base: SystemConfig, value: f64) -> SystemConfig {
        match self {
            Axis::PbsDb => base.with_p_bs_db(value),
            Axis::AmSq => base.with_near_allocation(value),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pbs-db" => Ok(Axis::PbsDb),
            "am2" => Ok(Axis::AmSq),
            other => Err(format!("unknown axis {other:?}; expected pbs-db or am2")),
        }
    }
}

/// Settings for a single evaluation, independent of the grid.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub rule: QuadratureRule,
    pub iters: u64,
    pub seed: u64,
    pub integration: IntegrationSpec,
}

impl Evaluator {
    pub fn new(quad_n: usize, iters: u64, seed: u64) -> Result<Self> {
        Ok(Evaluator {
            rule: QuadratureRule::new(quad_n)?,
            iters,
            seed,
            integration: IntegrationSpec::default(),
        })
    }

    /// Evaluates `metric` in the mode it is defined in. A no-eve configuration
    /// cannot supply an eavesdropper, so with-eve metrics are rejected there.
    /// Monte-Carlo runs draw from substream `stream`.
    pub fn evaluate(
        &self,
        cfg: &ValidatedConfig,
        metric: Metric,
        method: Method,
        stream: u64,
    ) -> Result<MetricEstimate> {
        if cfg.mode() == Mode::NoExternalEve && metric.mode() == Mode::WithExternalEve {
            return Err(CliError::ModeMismatch { metric });
        }
        let cfg = cfg.with_mode(metric.mode());
        let rng = RngSpec::new(self.seed, stream);
        let spec = &self.integration;
        let est = match method {
            Method::Analytic => match metric {
                Metric::SopWithEve => sop_with_eve(&cfg, &self.rule)?,
                Metric::SopNoEve => sop_no_eve(&cfg)?,
                Metric::NearSecrecy | Metric::NearSecrecyNoEve => erg_secrecy_rate_near(&cfg),
                Metric::FarSecrecy => erg_secrecy_rate_far(&cfg)?,
                Metric::FarRate => erg_rate_far(&cfg),
            },
            Method::MonteCarlo => match ergodic_kind(metric) {
                None => mc_sop(&cfg, self.iters, rng)?,
                Some(kind) => mc_ergodic(&cfg, kind, self.iters, rng)?,
            },
            Method::Oracle => {
                let v = match metric {
                    Metric::SopWithEve => oracle_sop_with_eve(&cfg, spec)?,
                    Metric::SopNoEve => oracle_sop_no_eve(&cfg, spec)?,
                    _ => oracle_ergodic(&cfg, ergodic_kind(metric).expect("ergodic metric"), spec)?,
                };
                let est = MetricEstimate::oracle(v);
                if metric.is_probability() {
                    est.clamp_probability()
                } else {
                    est
                }
            }
        };
        Ok(est)
    }
}

pub fn ergodic_kind(metric: Metric) -> Option<ErgodicMetric> {
    match metric {
        Metric::SopWithEve | Metric::SopNoEve => None,
        Metric::NearSecrecy | Metric::NearSecrecyNoEve => Some(ErgodicMetric::NearSecrecy),
        Metric::FarSecrecy => Some(ErgodicMetric::FarSecrecy),
        Metric::FarRate => Some(ErgodicMetric::FarRate),
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub metrics: Vec<Metric>,
    pub methods: Vec<Method>,
    pub base: SystemConfig,
    pub iters: u64,
    pub seed: u64,
    pub quad_n: usize,
}

impl SweepSpec {
    pub fn check(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(CliError::usage(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.start.partial_cmp(&self.stop) != Some(std::cmp::Ordering::Less) {
            return Err(CliError::usage(format!(
                "start must be below stop, got {}..{}",
                self.start, self.stop
            )));
        }
        if self.axis == Axis::AmSq && !(self.start > 0.0 && self.stop <= 0.5) {
            return Err(CliError::usage("the am2 axis must lie in (0, 0.5]"));
        }
        if self.metrics.is_empty() || self.methods.is_empty() {
            return Err(CliError::usage(
                "a sweep needs at least one metric and one method",
            ));
        }
        if self.base.mode == Mode::NoExternalEve {
            if let Some(&metric) = self
                .metrics
                .iter()
                .find(|m| m.mode() == Mode::WithExternalEve)
            {
                return Err(CliError::ModeMismatch { metric });
            }
        }
        Ok(())
    }

    /// Evenly spaced grid; both endpoints are reproduced exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| (self.start * (last - i) as f64 + self.stop * i as f64) / last as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: Axis,
    pub axis_value: f64,
    pub metric: Metric,
    pub method: Method,
    pub value: f64,
    pub std_err: Option<f64>,
    pub detail: String,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        let std_err = self.std_err.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.axis, self.axis_value, self.metric, self.method, self.value, std_err, self.detail
        )
    }
}

/// Points are evaluated concurrently; rows come back in axis order, then in
/// the order metrics and methods were listed. Point `i` uses MC substream `i`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let eval = Evaluator::new(spec.quad_n, spec.iters, spec.seed)?;
    let per_point: Vec<Vec<SweepRow>> = spec
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(i, x)| {
            let cfg = spec.axis.apply(spec.base, x).validate()?;
            let mut rows = Vec::with_capacity(spec.metrics.len() * spec.methods.len());
            for &metric in &spec.metrics {
                for &method in &spec.methods {
                    let est = eval.evaluate(&cfg, metric, method, i as u64)?;
                    rows.push(SweepRow {
                        axis: spec.axis,
                        axis_value: x,
                        metric,
                        method,
                        value: est.value,
                        std_err: est.std_err,
                        detail: est.meta.detail(),
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    out.flush()
}
