//! Gauss-Chebyshev rule used for the residual SOP integral.
//!
//! Nodes are `theta_i = cos((2i - 1) pi / (2N))`. To integrate a plain `f` on
//! `[-1, 1]` the Chebyshev weight is cancelled by multiplying with
//! `sqrt(1 - theta_i^2)`, so each node carries `(pi / N) sqrt(1 - theta_i^2)`.
//! The integrand-specific factors stay with the caller.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Order used for the SOP closed form unless overridden.
pub const DEFAULT_ORDER: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    half_circle_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroOrder);
        }
        let nf = n as f64;
        let (nodes, half_circle_weights) = (1..=n)
            .map(|i| {
                let angle = (2 * i - 1) as f64 * PI / (2.0 * nf);
                // sin(angle) == sqrt(1 - cos^2(angle)) without the cancellation near the ends.
                (angle.cos(), angle.sin() * PI / nf)
            })
            .unzip();
        Ok(QuadratureRule {
            nodes,
            half_circle_weights,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn half_circle_weights(&self) -> &[f64] {
        &self.half_circle_weights
    }

    /// Approximates `int_lo^hi f(x) dx` through the affine map
    /// `x = lo + (1 + theta)(hi - lo) / 2`.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Interval { lo, hi });
        }
        let half = (hi - lo) / 2.0;
        let mut sum = 0.0;
        for (&theta, &w) in self.nodes.iter().zip(&self.half_circle_weights) {
            let x = lo + (1.0 + theta) * half;
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::NonFiniteIntegrand { at: x });
            }
            sum += w * y;
        }
        Ok(half * sum)
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::new(DEFAULT_ORDER).expect("non-zero order")
    }
}

pub fn make_rule(n: usize) -> Result<QuadratureRule> {
    QuadratureRule::new(n)
}

pub fn integrate_cheb<F>(rule: &QuadratureRule, f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    rule.integrate(f, lo, hi)
}
