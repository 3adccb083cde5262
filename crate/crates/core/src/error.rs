use thiserror::Error;

use crate::config::Mode;

/// Errors produced by the evaluation kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("NOMA ordering violated: a_m^2 = {a_m_sq} exceeds a_n^2 = {a_n_sq}")]
    AllocationOrder { a_m_sq: f64, a_n_sq: f64 },

    #[error("power allocation must sum to one, got a_m^2 + a_n^2 = {sum}")]
    AllocationSum { sum: f64 },

    #[error("near user must not be farther than far user: d_m = {d_m}, d_n = {d_n}")]
    DistanceOrder { d_m: f64, d_n: f64 },

    #[error("argument {0} outside the domain of the exponential integral")]
    Domain(f64),

    #[error("quadrature order must be at least 1")]
    ZeroOrder,

    #[error("integration interval [{lo}, {hi}] is empty or not finite")]
    Interval { lo: f64, hi: f64 },

    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("adaptive integration did not reach tolerance within depth {max_depth} near x = {at}")]
    Tolerance { max_depth: usize, at: f64 },

    #[error("{what} requires mode {expected:?}")]
    WrongMode { what: &'static str, expected: Mode },

    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
