//! The analytic / Monte-Carlo / oracle cross-checks behind `nomasec validate`.

use std::fmt;
use std::time::{Duration, Instant};

use nomasec_core::analytic::{eavesdropper_sinr_cdf, erg_rate_far};
use nomasec_core::mc::{draw_samples, outage_event};
use nomasec_core::specfun::exp_ei;
use nomasec_core::{Method, Metric, Mode, RngSpec, SystemConfig, ValidatedConfig};

use crate::error::Result;
use crate::params::{DEFAULT_QUAD_N, DEFAULT_SEED};
use crate::presets::Preset;
use crate::sweep::{Evaluator, SweepSpec};

/// SNR grid shared by the cross-method checks.
pub const GRID_DB: [f64; 7] = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0];
/// Far-user ergodic rate at 60 dB reported for the reference deployment.
pub const FAR_RATE_60DB: f64 = 1.3219;
pub const FULL_ITERS: u64 = 1_000_000;
pub const QUICK_ITERS: u64 = 100_000;
/// Draws used for the structural checks regardless of `--quick`.
pub const STRUCTURAL_DRAWS: u64 = 1_000_000;

/// Deliberate mutations used to confirm the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates the first `e^s Ei(-s)` term of the far-user leakage.
    FarLeakageSign,
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub iters: u64,
    pub seed: u64,
    pub quad_n: usize,
    pub fault: Option<Fault>,
}

impl ValidateOptions {
    pub fn full() -> Self {
        ValidateOptions {
            iters: FULL_ITERS,
            seed: DEFAULT_SEED,
            quad_n: DEFAULT_QUAD_N,
            fault: None,
        }
    }

    pub fn quick() -> Self {
        ValidateOptions {
            iters: QUICK_ITERS,
            ..ValidateOptions::full()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<3} {}: {}",
            self.id, self.title, self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

pub struct Validator {
    opts: ValidateOptions,
    eval: Evaluator,
}

fn reference(db: f64, mode: Mode) -> ValidatedConfig {
    SystemConfig::reference(db)
        .with_mode(mode)
        .validate()
        .expect("reference deployment is valid")
}

fn seconds(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

impl Validator {
    pub fn new(opts: ValidateOptions) -> Result<Self> {
        let eval = Evaluator::new(opts.quad_n, opts.iters, opts.seed)?;
        Ok(Validator { opts, eval })
    }

    pub fn options(&self) -> &ValidateOptions {
        &self.opts
    }

    /// Closed-form value, with the configured fault applied.
    fn analytic(&self, cfg: &ValidatedConfig, metric: Metric) -> Result<f64> {
        if metric == Metric::FarSecrecy && self.opts.fault == Some(Fault::FarLeakageSign) {
            let c = cfg.config();
            let k_e = cfg.derived().gain_rate_e;
            let term = |s: f64| exp_ei(s).expect("positive argument");
            let leakage =
                -std::f64::consts::LOG2_E * (-term(k_e / c.p_bs) - term(k_e / (c.a_m_sq * c.p_bs)));
            return Ok(erg_rate_far(cfg).value - leakage);
        }
        Ok(self.eval.evaluate(cfg, metric, Method::Analytic, 0)?.value)
    }

    fn estimate(
        &self,
        cfg: &ValidatedConfig,
        metric: Metric,
        method: Method,
        stream: u64,
    ) -> Result<f64> {
        match method {
            Method::Analytic => self.analytic(cfg, metric),
            _ => Ok(self.eval.evaluate(cfg, metric, method, stream)?.value),
        }
    }

    /// Analytic values of `metric` over a preset's grid.
    fn curve(&self, spec: &SweepSpec, metric: Metric) -> Result<Vec<(f64, f64)>> {
        spec.points()
            .into_iter()
            .map(|x| {
                Ok((
                    x,
                    self.analytic(&spec.axis.apply(spec.base, x).validate()?, metric)?,
                ))
            })
            .collect()
    }

    pub fn degenerate_regimes(&self) -> Result<Check> {
        let mut failures = Vec::new();
        let mut count = 0;
        for db in [0.0, 30.0, 60.0] {
            // a_m^2 = 2^{-R_n} on the boundary and beyond it.
            for (a_m, r_n) in [(0.5, 1.0), (0.3, 2.0)] {
                let mut c = SystemConfig::reference(db).with_near_allocation(a_m);
                c.r_n = r_n;
                let v = self.analytic(&c.validate()?, Metric::SopWithEve)?;
                count += 1;
                if v != 1.0 {
                    failures.push(format!(
                        "sop-with-eve a_m^2={a_m} R_n={r_n} {db} dB gave {v}"
                    ));
                }
            }
            // a_n^2 / a_m^2 = C_1 on the boundary and below it.
            for (a_m, r_n) in [(0.25, 2.0), (0.4, 2.0)] {
                let mut c = SystemConfig::reference(db)
                    .with_near_allocation(a_m)
                    .with_mode(Mode::NoExternalEve);
                c.r_n = r_n;
                let v = self.analytic(&c.validate()?, Metric::SopNoEve)?;
                count += 1;
                if v != 1.0 {
                    failures.push(format!("sop-no-eve a_m^2={a_m} R_n={r_n} {db} dB gave {v}"));
                }
            }
        }
        Ok(Check {
            id: "1",
            title: "degenerate regimes give SOP exactly 1",
            passed: failures.is_empty(),
            detail: if failures.is_empty() {
                format!("{count} configurations")
            } else {
                failures.join("; ")
            },
        })
    }

    pub fn closed_form_vs_oracle(&self) -> Result<Check> {
        const NO_EVE_TOL: f64 = 1e-9;
        const WITH_EVE_TOL: f64 = 1e-5;
        const TIME_LIMIT: Duration = Duration::from_secs(10);
        let started = Instant::now();
        let (mut worst_no, mut worst_with) = ((0.0f64, 0.0), (0.0f64, 0.0));
        for db in GRID_DB {
            let n = reference(db, Mode::NoExternalEve);
            let d = (self.analytic(&n, Metric::SopNoEve)?
                - self.estimate(&n, Metric::SopNoEve, Method::Oracle, 0)?)
            .abs();
            if d >= worst_no.0 {
                worst_no = (d, db);
            }
            let e = reference(db, Mode::WithExternalEve);
            let d = (self.analytic(&e, Metric::SopWithEve)?
                - self.estimate(&e, Metric::SopWithEve, Method::Oracle, 0)?)
            .abs();
            if d >= worst_with.0 {
                worst_with = (d, db);
            }
        }
        let elapsed = started.elapsed();
        Ok(Check {
            id: "2",
            title: "closed-form SOP vs oracle",
            passed: worst_no.0 <= NO_EVE_TOL && worst_with.0 <= WITH_EVE_TOL && elapsed < TIME_LIMIT,
            detail: format!(
                "sop-no-eve max |diff| {:.3e} at {} dB (tol {NO_EVE_TOL:e}); \
                 sop-with-eve N={} max |diff| {:.3e} at {} dB (tol {WITH_EVE_TOL:e}); {} (limit {})",
                worst_no.0,
                worst_no.1,
                self.opts.quad_n,
                worst_with.0,
                worst_with.1,
                seconds(elapsed),
                seconds(TIME_LIMIT),
            ),
        })
    }

    pub fn analytic_vs_monte_carlo(&self) -> Result<Check> {
        const TIME_LIMIT: Duration = Duration::from_secs(120);
        let started = Instant::now();
        let mut failures = Vec::new();
        let mut count = 0;
        for (i, db) in GRID_DB.into_iter().enumerate() {
            let cfg = reference(db, Mode::WithExternalEve);
            for metric in Metric::ALL {
                let a = self.analytic(&cfg, metric)?;
                let mc = self
                    .eval
                    .evaluate(&cfg, metric, Method::MonteCarlo, i as u64)?;
                let se = mc.std_err.unwrap_or(0.0);
                let tol = 3.0 * se + 1e-4;
                let diff = (a - mc.value).abs();
                count += 1;
                if diff > tol {
                    failures.push(format!(
                        "{metric} at {db} dB: analytic {a} vs mc {} (|diff| {diff:.3e} > {tol:.3e})",
                        mc.value
                    ));
                }
            }
        }
        let elapsed = started.elapsed();
        let timing = format!("{} (limit {})", seconds(elapsed), seconds(TIME_LIMIT));
        Ok(Check {
            id: "3",
            title: "closed forms vs Monte Carlo",
            passed: failures.is_empty() && elapsed < TIME_LIMIT,
            detail: if failures.is_empty() {
                format!(
                    "{count} comparisons within 3 std_err + 1e-4 at {} iters; {timing}",
                    self.opts.iters
                )
            } else {
                format!("{}; {timing}", failures.join("; "))
            },
        })
    }

    pub fn far_rate_at_60_db(&self) -> Result<Check> {
        const TOL: f64 = 0.02;
        let cfg = reference(60.0, Mode::WithExternalEve);
        let mut parts = Vec::new();
        let mut passed = true;
        for method in [Method::Analytic, Method::MonteCarlo, Method::Oracle] {
            let v = self.estimate(&cfg, Metric::FarRate, method, 0)?;
            passed &= (v - FAR_RATE_60DB).abs() <= TOL;
            parts.push(format!("{method} {v:.5}"));
        }
        Ok(Check {
            id: "4",
            title: "far-rate at 60 dB",
            passed,
            detail: format!("{} (target {FAR_RATE_60DB} +/- {TOL})", parts.join(", ")),
        })
    }

    pub fn curve_shapes(&self) -> Result<Vec<Check>> {
        let fig3 = Preset::Fig3.spec();
        let fig4 = Preset::Fig4.spec();
        let fig5 = Preset::Fig5.spec();
        let fig6 = Preset::Fig6.spec();
        let at = |curve: &[(f64, f64)], x: f64| {
            curve
                .iter()
                .find(|(p, _)| (p - x).abs() < 1e-9)
                .map(|&(_, v)| v)
                .expect("grid point")
        };
        let mut checks = Vec::new();

        let sop_no = self.curve(&fig3, Metric::SopNoEve)?;
        let non_increasing = sop_no.windows(2).all(|w| w[1].1 <= w[0].1);
        let rel = (at(&sop_no, 60.0) - at(&sop_no, 50.0)).abs() / at(&sop_no, 50.0);
        checks.push(Check {
            id: "5a",
            title: "sop-no-eve vs SNR is non-increasing and flat above 50 dB",
            passed: non_increasing && rel <= 1e-3,
            detail: format!(
                "non-increasing: {non_increasing}; relative change 50->60 dB {rel:.3e} (tol 1e-3)"
            ),
        });

        let sop_with = self.curve(&fig3, Metric::SopWithEve)?;
        let (argmin, &(x_min, v_min)) = sop_with
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .expect("non-empty grid");
        let interior = argmin > 0
            && argmin + 1 < sop_with.len()
            && v_min < sop_with[0].1
            && v_min < sop_with[sop_with.len() - 1].1;
        checks.push(Check {
            id: "5b",
            title: "sop-with-eve vs SNR has an interior minimum",
            passed: interior,
            detail: format!(
                "minimum {v_min:.5} at {x_min} dB; endpoints {:.5} / {:.5}",
                sop_with[0].1,
                sop_with[sop_with.len() - 1].1
            ),
        });

        let alloc: Vec<_> = self
            .curve(&fig4, Metric::SopNoEve)?
            .into_iter()
            .filter(|&(x, _)| x <= 0.25 + 1e-9)
            .collect();
        let decreasing = alloc.windows(2).all(|w| w[1].1 < w[0].1);
        checks.push(Check {
            id: "5c",
            title: "sop-no-eve decreases in a_m^2 on [0.05, 0.25]",
            passed: decreasing,
            detail: format!(
                "{} points, {:.5} -> {:.5}",
                alloc.len(),
                alloc[0].1,
                alloc[alloc.len() - 1].1
            ),
        });

        let near = self.curve(&fig5, Metric::NearSecrecy)?;
        let rel = (at(&near, 60.0) - at(&near, 50.0)).abs() / at(&near, 50.0).abs();
        checks.push(Check {
            id: "5d",
            title: "near-secrecy vs SNR is flat above 50 dB",
            passed: rel <= 1e-2,
            detail: format!("relative change 50->60 dB {rel:.3e} (tol 1e-2)"),
        });

        let far: Vec<_> = self
            .curve(&fig5, Metric::FarSecrecy)?
            .into_iter()
            .filter(|&(x, _)| x >= 40.0)
            .collect();
        let falling = far.windows(2).all(|w| w[1].1 < w[0].1);
        checks.push(Check {
            id: "5e",
            title: "far-secrecy decreases above 40 dB",
            passed: falling,
            detail: format!(
                "far-secrecy {}",
                far.iter()
                    .map(|(x, v)| format!("{x} dB: {v:.5}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        });

        let mut violations = Vec::new();
        for (with, without) in [
            (Metric::NearSecrecy, Metric::NearSecrecyNoEve),
            (Metric::FarSecrecy, Metric::FarRate),
        ] {
            let a = self.curve(&fig6, with)?;
            let b = self.curve(&fig6, without)?;
            for ((x, va), (_, vb)) in a.iter().zip(&b) {
                if va.partial_cmp(vb) != Some(std::cmp::Ordering::Less) {
                    violations.push(format!("{with} {va:.5} >= {without} {vb:.5} at a_m^2={x}"));
                }
            }
        }
        checks.push(Check {
            id: "5f",
            title: "eavesdropper lowers both users' rates on the allocation sweep",
            passed: violations.is_empty(),
            detail: if violations.is_empty() {
                format!("{} points, both users", fig6.steps)
            } else {
                violations.join("; ")
            },
        });
        Ok(checks)
    }

    pub fn structural_properties(&self) -> Result<Check> {
        const KS_TOL: f64 = 0.002;
        let cfg = reference(30.0, Mode::WithExternalEve);
        let draws = draw_samples(&cfg, STRUCTURAL_DRAWS, RngSpec::new(self.opts.seed, 0));
        let mut inclusion = 0usize;
        let mut r4 = 0usize;
        for s in &draws {
            let ev = outage_event(&cfg, s);
            if s.g_n >= s.g_e && ev.e2 && ev.e3 && !ev.e1 {
                inclusion += 1;
            }
            if ev.r4_event {
                r4 += 1;
            }
        }
        let c = cfg.config();
        let mut x: Vec<f64> = draws
            .iter()
            .map(|s| s.g_e * c.a_n_sq / (s.g_e * c.a_m_sq + 1.0 / c.p_bs))
            .collect();
        x.sort_by(f64::total_cmp);
        let n = x.len() as f64;
        let ks = x
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let f = eavesdropper_sinr_cdf(&cfg, v);
                (f - i as f64 / n).max((i + 1) as f64 / n - f)
            })
            .fold(0.0, f64::max);
        Ok(Check {
            id: "6",
            title: "structural Monte-Carlo properties at 30 dB",
            passed: inclusion == 0 && r4 == 0 && ks <= KS_TOL,
            detail: format!(
                "inclusion violations {inclusion}, r4 events {r4}, K-S distance {ks:.2e} (tol {KS_TOL}) over {STRUCTURAL_DRAWS} draws"
            ),
        })
    }

    pub fn run(&self) -> Result<Report> {
        let mut checks = vec![
            self.degenerate_regimes()?,
            self.closed_form_vs_oracle()?,
            self.analytic_vs_monte_carlo()?,
            self.far_rate_at_60_db()?,
        ];
        checks.extend(self.curve_shapes()?);
        checks.push(self.structural_properties()?);
        Ok(Report { checks })
    }
}

pub fn run_validate(opts: ValidateOptions) -> Result<Report> {
    Validator::new(opts)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injected_fault_is_reported_by_metric() {
        let opts = ValidateOptions {
            iters: 20_000,
            fault: Some(Fault::FarLeakageSign),
            ..ValidateOptions::quick()
        };
        let check = Validator::new(opts)
            .unwrap()
            .analytic_vs_monte_carlo()
            .unwrap();
        assert!(!check.passed);
        assert!(check.detail.contains("far-secrecy"));
        assert!(!check.detail.contains("near-secrecy"));
    }

    #[test]
    fn fault_free_far_secrecy_matches_core() {
        let v = Validator::new(ValidateOptions::quick()).unwrap();
        let cfg = reference(30.0, Mode::WithExternalEve);
        let core = nomasec_core::analytic::erg_secrecy_rate_far(&cfg)
            .unwrap()
            .value;
        assert_eq!(v.analytic(&cfg, Metric::FarSecrecy).unwrap(), core);
    }

    #[test]
    fn degenerate_check_passes() {
        let v = Validator::new(ValidateOptions::quick()).unwrap();
        assert!(v.degenerate_regimes().unwrap().passed);
    }
}
