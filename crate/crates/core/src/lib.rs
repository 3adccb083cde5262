//! Secrecy performance of a two-user downlink NOMA system in which the far
//! user eavesdrops on the near user, optionally alongside an external passive
//! eavesdropper.
//!
//! Three independent routes evaluate the same metrics:
//!
//! * [`analytic`]: closed forms built on [`specfun::exp_ei`] and, for the SOP
//!   with an external eavesdropper, a Gauss-Chebyshev rule from [`quad`];
//! * [`mc`]: seeded, counter-addressed Monte-Carlo simulation of the fading gains;
//! * [`oracle`]: adaptive numeric integration straight from the event definitions.

pub mod analytic;
pub mod config;
pub mod error;
pub mod mc;
pub mod metric;
pub mod oracle;
pub mod quad;
pub mod specfun;

pub use config::{
    db_to_linear, linear_to_db, DerivedConstants, Mode, SystemConfig, ValidatedConfig,
};
pub use error::{Error, Result};
pub use mc::{ChannelSample, ErgodicMetric, OutageEvents, RngSpec};
pub use metric::{EstimateMeta, Method, Metric, MetricEstimate};
pub use oracle::IntegrationSpec;
pub use quad::QuadratureRule;
