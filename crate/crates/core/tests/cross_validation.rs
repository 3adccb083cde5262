//! Closed forms against the integration oracle and the simulator.

use nomasec_core::analytic::{
    eavesdropper_sinr_cdf, erg_rate_far, erg_secrecy_rate_far, erg_secrecy_rate_near, sop_no_eve,
    sop_with_eve,
};
use nomasec_core::mc::{draw_samples, mc_ergodic, mc_sop, outage_event};
use nomasec_core::oracle::{oracle_ergodic, oracle_sop_no_eve, oracle_sop_with_eve};
use nomasec_core::specfun::exp_ei;
use nomasec_core::{
    ErgodicMetric, IntegrationSpec, Mode, QuadratureRule, RngSpec, SystemConfig, ValidatedConfig,
};

const GRID_DB: [f64; 7] = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0];

fn with_eve(db: f64) -> ValidatedConfig {
    SystemConfig::reference(db).validate().unwrap()
}

fn no_eve(db: f64) -> ValidatedConfig {
    SystemConfig::reference(db)
        .with_mode(Mode::NoExternalEve)
        .validate()
        .unwrap()
}

#[test]
fn no_eve_sop_matches_oracle() {
    let spec = IntegrationSpec::default();
    for db in GRID_DB {
        let cfg = no_eve(db);
        let a = sop_no_eve(&cfg).unwrap().value;
        let o = oracle_sop_no_eve(&cfg, &spec).unwrap();
        assert!((a - o).abs() <= 1e-9, "{db} dB: {a} vs {o}");
    }
}

#[test]
fn unexponentiated_denominator_variant_is_rejected_by_oracle() {
    // 1 - d_n^a / (d_n + 2^R_m d_m^a) e^{...} is the literal printed variant.
    let cfg = no_eve(30.0);
    let c = cfg.config();
    let d = cfg.derived();
    let two_rm = 2f64.powf(c.r_m);
    let exponent = d.gain_rate_m * (two_rm - 1.0) / (c.a_m_sq * c.p_bs)
        + d.tau_n.unwrap() * (d.gain_rate_n + two_rm * d.gain_rate_m);
    let literal = 1.0 - 1296.0 / (6.0 + two_rm * 256.0) * (-exponent).exp();
    let oracle = oracle_sop_no_eve(&cfg, &IntegrationSpec::default()).unwrap();
    assert!((literal - oracle).abs() > 0.1);
    assert!((sop_no_eve(&cfg).unwrap().value - oracle).abs() <= 1e-9);
}

#[test]
fn with_eve_sop_tracks_oracle_at_high_order() {
    let spec = IntegrationSpec::default();
    let rule = QuadratureRule::new(2000).unwrap();
    for db in GRID_DB {
        let cfg = with_eve(db);
        let a = sop_with_eve(&cfg, &rule).unwrap().value;
        let o = oracle_sop_with_eve(&cfg, &spec).unwrap();
        assert!((a - o).abs() <= 1e-6, "{db} dB: {a} vs {o}");
    }
}

#[test]
fn ergodic_closed_forms_match_oracle() {
    let spec = IntegrationSpec::default();
    for db in GRID_DB {
        let e = with_eve(db);
        let n = no_eve(db);
        let pairs = [
            (
                erg_secrecy_rate_near(&e).value,
                oracle_ergodic(&e, ErgodicMetric::NearSecrecy, &spec).unwrap(),
            ),
            (
                erg_secrecy_rate_near(&n).value,
                oracle_ergodic(&n, ErgodicMetric::NearSecrecy, &spec).unwrap(),
            ),
            (
                erg_rate_far(&e).value,
                oracle_ergodic(&e, ErgodicMetric::FarRate, &spec).unwrap(),
            ),
            (
                erg_secrecy_rate_far(&e).unwrap().value,
                oracle_ergodic(&e, ErgodicMetric::FarSecrecy, &spec).unwrap(),
            ),
        ];
        for (i, (a, o)) in pairs.into_iter().enumerate() {
            assert!((a - o).abs() <= 1e-8, "{db} dB, pair {i}: {a} vs {o}");
        }
    }
}

#[test]
fn exponentiated_sum_variant_is_rejected_by_oracle() {
    // Literal leakage term with (d_n^a + d_e^a)^a in place of (d_n^a + d_e^a).
    let cfg = with_eve(30.0);
    let c = cfg.config();
    let snr = c.a_m_sq * c.p_bs;
    let term = |s: f64| exp_ei(s).unwrap();
    let (pn, pe) = (6f64.powi(4), 7f64.powi(4));
    let literal = -std::f64::consts::LOG2_E
        * (term(256.0 / snr) - term(pn / snr) - term(pe / snr) + term((pn + pe).powi(4) / snr));
    let oracle = oracle_ergodic(
        &cfg,
        ErgodicMetric::NearSecrecy,
        &IntegrationSpec::default(),
    )
    .unwrap();
    let mc = mc_ergodic(
        &cfg,
        ErgodicMetric::NearSecrecy,
        1_000_000,
        RngSpec::new(3, 0),
    )
    .unwrap();
    let se = mc.std_err.unwrap();
    assert!(
        (literal - mc.value).abs() > 10.0 * se,
        "{literal} vs {}",
        mc.value
    );
    assert!((erg_secrecy_rate_near(&cfg).value - oracle).abs() <= 1e-8);
    assert!((erg_secrecy_rate_near(&cfg).value - mc.value).abs() <= 3.0 * se);
}

#[test]
fn oracle_is_self_consistent_under_tighter_tolerance() {
    let loose = IntegrationSpec::default();
    let tight = IntegrationSpec {
        rel_tol: loose.rel_tol / 2.0,
        ..loose
    };
    for db in [20.0, 40.0] {
        let (e, n) = (with_eve(db), no_eve(db));
        let pairs = [
            (
                oracle_sop_no_eve(&n, &loose).unwrap(),
                oracle_sop_no_eve(&n, &tight).unwrap(),
            ),
            (
                oracle_sop_with_eve(&e, &loose).unwrap(),
                oracle_sop_with_eve(&e, &tight).unwrap(),
            ),
            (
                oracle_ergodic(&e, ErgodicMetric::NearSecrecy, &loose).unwrap(),
                oracle_ergodic(&e, ErgodicMetric::NearSecrecy, &tight).unwrap(),
            ),
            (
                oracle_ergodic(&e, ErgodicMetric::FarSecrecy, &loose).unwrap(),
                oracle_ergodic(&e, ErgodicMetric::FarSecrecy, &tight).unwrap(),
            ),
        ];
        for (a, b) in pairs {
            assert!(
                (a - b).abs() < loose.rel_tol * a.abs().max(1e-300) + loose.abs_tol,
                "{a} vs {b}"
            );
        }
    }
}

#[test]
fn receding_eavesdropper_recovers_no_eve_results() {
    let spec = IntegrationSpec::default();
    let far_eve = |db: f64, d_e: f64| {
        let mut c = SystemConfig::reference(db);
        c.d_e = d_e;
        c.validate().unwrap()
    };
    // Oracle route: both sides exact.
    let e = far_eve(30.0, 300.0);
    let o_with = oracle_sop_with_eve(&e, &spec).unwrap();
    let o_without = oracle_sop_no_eve(&e.with_mode(Mode::NoExternalEve), &spec).unwrap();
    assert!(
        (o_with - o_without).abs() <= 1e-6,
        "{o_with} vs {o_without}"
    );

    // Closed form: the residual integrand concentrates near zero, so the
    // fixed rule needs a higher order to resolve it.
    let e = far_eve(60.0, 100.0);
    let rule = QuadratureRule::new(20_000).unwrap();
    let a_with = sop_with_eve(&e, &rule).unwrap().value;
    let a_without = sop_no_eve(&e.with_mode(Mode::NoExternalEve)).unwrap().value;
    assert!(
        (a_with - a_without).abs() <= 1e-4,
        "{a_with} vs {a_without}"
    );

    let e = far_eve(30.0, 100.0);
    let near_with = erg_secrecy_rate_near(&e).value;
    let near_without = erg_secrecy_rate_near(&e.with_mode(Mode::NoExternalEve)).value;
    assert!((near_with - near_without).abs() <= 1e-6);
}

#[test]
fn no_eve_sop_decreases_with_near_allocation_up_to_quarter() {
    let mut prev = f64::INFINITY;
    for i in 0..=20 {
        let a_m = 0.05 + 0.01 * i as f64;
        let cfg = SystemConfig::reference(30.0)
            .with_near_allocation(a_m)
            .with_mode(Mode::NoExternalEve)
            .validate()
            .unwrap();
        let v = sop_no_eve(&cfg).unwrap().value;
        assert!(v <= prev, "a_m^2 = {a_m}: {v} > {prev}");
        prev = v;
    }
}

#[test]
fn sop_values_lie_in_unit_interval_before_clamping() {
    let rule = QuadratureRule::default();
    for i in 0..=12 {
        let db = 5.0 * i as f64;
        for est in [
            sop_with_eve(&with_eve(db), &rule).unwrap(),
            sop_no_eve(&no_eve(db)).unwrap(),
        ] {
            assert!(
                est.meta.clamped.is_none(),
                "{db} dB clamped {:?}",
                est.meta.clamped
            );
            assert!((0.0..=1.0).contains(&est.value));
        }
    }
}

#[test]
fn monte_carlo_agrees_with_closed_forms_at_30_db() {
    let iters = 1_000_000;
    let rng = RngSpec::new(2024, 0);
    let rule = QuadratureRule::default();
    let (e, n) = (with_eve(30.0), no_eve(30.0));
    let checks = [
        (
            "sop with eve",
            sop_with_eve(&e, &rule).unwrap().value,
            mc_sop(&e, iters, rng).unwrap(),
        ),
        (
            "sop no eve",
            sop_no_eve(&n).unwrap().value,
            mc_sop(&n, iters, rng).unwrap(),
        ),
        (
            "near secrecy",
            erg_secrecy_rate_near(&e).value,
            mc_ergodic(&e, ErgodicMetric::NearSecrecy, iters, rng).unwrap(),
        ),
        (
            "far rate",
            erg_rate_far(&e).value,
            mc_ergodic(&e, ErgodicMetric::FarRate, iters, rng).unwrap(),
        ),
        (
            "far secrecy",
            erg_secrecy_rate_far(&e).unwrap().value,
            mc_ergodic(&e, ErgodicMetric::FarSecrecy, iters, rng).unwrap(),
        ),
    ];
    for (name, analytic, mc) in checks {
        let tol = 3.0 * mc.std_err.unwrap() + 1e-4;
        assert!(
            (analytic - mc.value).abs() <= tol,
            "{name}: {analytic} vs {}",
            mc.value
        );
    }
}

#[test]
fn structural_event_properties() {
    let cfg = with_eve(30.0);
    let draws = draw_samples(&cfg, 1_000_000, RngSpec::new(77, 0));
    let mut inclusion_violations = 0;
    let mut r4 = 0;
    for s in &draws {
        let ev = outage_event(&cfg, s);
        if ev.e2 && ev.e3 && s.g_n >= s.g_e && !ev.e1 {
            inclusion_violations += 1;
        }
        if ev.r4_event {
            r4 += 1;
        }
    }
    assert_eq!(inclusion_violations, 0);
    assert_eq!(r4, 0);

    let c = cfg.config();
    let mut x: Vec<f64> = draws
        .iter()
        .map(|s| s.g_e * c.a_n_sq / (s.g_e * c.a_m_sq + 1.0 / c.p_bs))
        .collect();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = x.len() as f64;
    let ks = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = eavesdropper_sinr_cdf(&cfg, v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks <= 0.002, "KS = {ks}");
}
