use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Mode;
use crate::error::Error;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    MonteCarlo,
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::MonteCarlo => "monte-carlo",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "mc" | "monte-carlo" => Ok(Method::MonteCarlo),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Every quantity the crate can evaluate. Each metric fixes the eavesdropper mode it is defined in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    SopWithEve,
    SopNoEve,
    /// Ergodic secrecy rate of the near user against `U_n` and `U_e`.
    NearSecrecy,
    /// Ergodic secrecy rate of the near user against `U_n` only.
    NearSecrecyNoEve,
    /// Ergodic secrecy rate of the far user against `U_e`.
    FarSecrecy,
    /// Ergodic rate of the far user.
    FarRate,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::SopWithEve,
        Metric::SopNoEve,
        Metric::NearSecrecy,
        Metric::NearSecrecyNoEve,
        Metric::FarSecrecy,
        Metric::FarRate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SopWithEve => "sop-with-eve",
            Metric::SopNoEve => "sop-no-eve",
            Metric::NearSecrecy => "near-secrecy",
            Metric::NearSecrecyNoEve => "near-secrecy-no-eve",
            Metric::FarSecrecy => "far-secrecy",
            Metric::FarRate => "far-rate",
        }
    }

    /// The mode the metric is evaluated in. The far-user ergodic rate has no
    /// eavesdropper term, so it is reported under the no-eve mode.
    pub fn mode(self) -> Mode {
        match self {
            Metric::SopWithEve | Metric::NearSecrecy | Metric::FarSecrecy => Mode::WithExternalEve,
            Metric::SopNoEve | Metric::NearSecrecyNoEve | Metric::FarRate => Mode::NoExternalEve,
        }
    }

    pub fn is_probability(self) -> bool {
        matches!(self, Metric::SopWithEve | Metric::SopNoEve)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

/// Bookkeeping attached to an estimate.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<u64>,
    /// Amount removed by clamping a probability into `[0, 1]`, when above `1e-9`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clamped: Option<f64>,
}

impl EstimateMeta {
    /// Compact `key=value;...` rendering used in CSV output.
    pub fn detail(&self) -> String {
        let mut parts = Vec::new();
        if let Some(n) = self.quad_n {
            parts.push(format!("quad_n={n}"));
        }
        if let Some(n) = self.iters {
            parts.push(format!("iters={n}"));
        }
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        if let Some(s) = self.stream {
            parts.push(format!("stream={s}"));
        }
        if let Some(c) = self.clamped {
            parts.push(format!("clamped={c}"));
        }
        parts.join(";")
    }
}

/// A metric value plus its provenance. `std_err` is present exactly for Monte-Carlo estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_err: Option<f64>,
    pub meta: EstimateMeta,
}

/// Clamping below this is treated as rounding noise and not reported.
pub const CLAMP_REPORT_THRESHOLD: f64 = 1e-9;

impl MetricEstimate {
    pub fn analytic(value: f64) -> Self {
        MetricEstimate {
            value,
            method: Method::Analytic,
            std_err: None,
            meta: EstimateMeta::default(),
        }
    }

    pub fn oracle(value: f64) -> Self {
        MetricEstimate {
            value,
            method: Method::Oracle,
            std_err: None,
            meta: EstimateMeta::default(),
        }
    }

    pub fn monte_carlo(value: f64, std_err: f64, iters: u64, seed: u64, stream: u64) -> Self {
        MetricEstimate {
            value,
            method: Method::MonteCarlo,
            std_err: Some(std_err),
            meta: EstimateMeta {
                iters: Some(iters),
                seed: Some(seed),
                stream: Some(stream),
                ..EstimateMeta::default()
            },
        }
    }

    pub fn with_quad_n(mut self, n: usize) -> Self {
        self.meta.quad_n = Some(n);
        self
    }

    /// Clamps a probability into `[0, 1]`, recording any non-negligible adjustment.
    pub fn clamp_probability(mut self) -> Self {
        let clamped = self.value.clamp(0.0, 1.0);
        let moved = (clamped - self.value).abs();
        if moved > CLAMP_REPORT_THRESHOLD {
            self.meta.clamped = Some(moved);
        }
        self.value = clamped;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!(matches!(
            "sop".parse::<Metric>(),
            Err(Error::UnknownMetric(_))
        ));
    }

    #[test]
    fn clamping_reports_only_material_moves() {
        let e = MetricEstimate::analytic(1.0 + 1e-12).clamp_probability();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.meta.clamped, None);
        let e = MetricEstimate::analytic(-1e-6).clamp_probability();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.meta.clamped, Some(1e-6));
    }

    #[test]
    fn std_err_only_for_monte_carlo() {
        assert!(MetricEstimate::analytic(0.5).std_err.is_none());
        assert!(MetricEstimate::oracle(0.5).std_err.is_none());
        let mc = MetricEstimate::monte_carlo(0.5, 1e-3, 10, 1, 2);
        assert_eq!(mc.std_err, Some(1e-3));
        assert_eq!(mc.meta.detail(), "iters=10;seed=1;stream=2");
    }
}
