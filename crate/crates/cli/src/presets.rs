//! Named sweeps over the reference deployment.

use std::fmt;
use std::str::FromStr;

use nomasec_core::{Method, Metric, SystemConfig};

use crate::params::{DEFAULT_ITERS, DEFAULT_QUAD_N, DEFAULT_SEED};
use crate::sweep::{Axis, SweepSpec};

/// SNR used on the allocation axis.
pub const ALLOCATION_SWEEP_DB: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Both SOPs against transmit SNR.
    Fig3,
    /// Both SOPs against the near-user power share.
    Fig4,
    /// Ergodic rates against transmit SNR.
    Fig5,
    /// Ergodic rates against the near-user power share.
    Fig6,
}

const SOP_METRICS: [Metric; 2] = [Metric::SopWithEve, Metric::SopNoEve];
const RATE_METRICS: [Metric; 4] = [
    Metric::NearSecrecy,
    Metric::NearSecrecyNoEve,
    Metric::FarSecrecy,
    Metric::FarRate,
];

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig3, Preset::Fig4, Preset::Fig5, Preset::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }

    pub fn spec(self) -> SweepSpec {
        let (axis, start, stop, steps) = match self {
            Preset::Fig3 | Preset::Fig5 => (Axis::PbsDb, 0.0, 60.0, 13),
            Preset::Fig4 | Preset::Fig6 => (Axis::AmSq, 0.05, 0.5, 10),
        };
        let metrics = match self {
            Preset::Fig3 | Preset::Fig4 => SOP_METRICS.to_vec(),
            Preset::Fig5 | Preset::Fig6 => RATE_METRICS.to_vec(),
        };
        SweepSpec {
            axis,
            start,
            stop,
            steps,
            metrics,
            methods: vec![Method::Analytic, Method::MonteCarlo],
            base: SystemConfig::reference(ALLOCATION_SWEEP_DB),
            iters: DEFAULT_ITERS,
            seed: DEFAULT_SEED,
            quad_n: DEFAULT_QUAD_N,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset {s:?}; expected fig3, fig4, fig5 or fig6"))
    }
}
