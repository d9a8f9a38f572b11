use std::f64::consts::SQRT_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::*;
use crate::dynamics::{integrate, ModelParams, Observer, RunStatus, SolverConfig, State};
use crate::initial::{sample, Family, FamilyParams};
use crate::spaces::NormTruncation;
use crate::spectral::{Field, Grid};
use crate::testutil::gaussian;

fn series_of(k: u32, states: &[State<f64>], spec: DiagnosticsSpec) -> DiagnosticsSeries {
    let mut rec = DiagnosticsRecorder::new(k, spec);
    for s in states {
        rec.observe(s);
    }
    rec.finish(RunStatus::Completed).unwrap()
}

fn run(k: u32, u0: Field<f64>, dt: f64, t_end: f64, stride: usize) -> DiagnosticsSeries {
    let cfg = SolverConfig {
        dt,
        t_end,
        snapshot_stride: stride,
        ..SolverConfig::default()
    };
    let mut rec = DiagnosticsRecorder::new(k, DiagnosticsSpec::default());
    let out = integrate(State { t: 0.0, u: u0 }, &cfg, ModelParams::new(k).unwrap(), &mut [&mut rec]).unwrap();
    rec.finish(out.status).unwrap()
}

#[test]
fn kappa_one_is_one_over_144() {
    let k1 = lifespan_constant_exact(1, &BigRational::one()).unwrap();
    assert_eq!(k1, BigRational::new(BigInt::one(), BigInt::from(144)));
    let k2 = lifespan_constant_exact(2, &BigRational::one()).unwrap();
    assert_eq!(k2, BigRational::new(BigInt::one(), BigInt::from(1144)));
    assert!((lifespan_constant(1, 1.0f64).unwrap() * 144.0 - 1.0).abs() <= 1e-15);
    assert!((lifespan_constant(2, 1.0f64).unwrap() * 1144.0 - 1.0).abs() <= 1e-15);
}

#[test]
fn kappa_scales_with_cm() {
    let two = BigRational::from_integer(BigInt::from(2));
    for k in 1..5 {
        let a = lifespan_constant_exact(k, &BigRational::one()).unwrap();
        let b = lifespan_constant_exact(k, &two).unwrap();
        assert_eq!(a, b * num_traits::pow(two.clone(), k as usize));
    }
}

#[test]
fn lifespan_calculator_example() {
    let t = lifespan_from_norm(1, 1.0, 1.0, 0.5, 1.0).unwrap();
    assert!((t - 0.5 / 144.0).abs() < 1e-18);
    assert!(lifespan_from_norm(1, 1.0, 0.5, 0.5, 1.0).is_err());
    assert!(lifespan_from_norm(1, 1.0, 0.5, 0.7, 1.0).is_err());
    assert!(lifespan_from_norm(1, 1.0, 1.5, 0.5, 1.0).is_err());
    assert!(lifespan_constant_exact(0, &BigRational::one()).is_err());
}

#[test]
fn lifespan_homogeneous_in_norm() {
    let grid = Grid::new(20.0, 256).unwrap();
    let u = gaussian(&grid, 1.0);
    let u2 = &u * 2.0;
    let tr = NormTruncation::default();
    for k in 1..4 {
        let a = lifespan_bound(&u, k, 3, 0.8, 0.4, 1.0, tr).unwrap();
        let b = lifespan_bound(&u2, k, 3, 0.8, 0.4, 1.0, tr).unwrap();
        assert!((a / b / 2f64.powi(k as i32) - 1.0).abs() < 1e-12);
    }
    assert!(lifespan_bound(&u, 1, 2, 0.8, 0.4, 1.0, tr).is_err());
}

#[test]
fn lifespan_report_passes() {
    for k in 1..6 {
        let r = lifespan_report(k).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }
}

#[test]
fn radius_bound_closed_forms() {
    let b0 = radius_lower_bound(0.0, -0.3, 0.7, 2.0).unwrap();
    assert!((b0 - (-0.3f64).exp()).abs() < 1e-15);
    // mu = 1 and L1 = 1: bound = r(0) e e^{-e^{112 t}}.
    let km = 7.0 / (52.0 * SQRT_2);
    for &t in &[0.0, 1e-3, 5e-3, 1e-2] {
        let expect = (-0.5f64).exp() * std::f64::consts::E * (-(112.0 * t as f64).exp()).exp();
        let got = radius_lower_bound(t, -0.5, km, 1.0).unwrap();
        assert!((got - expect).abs() <= 1e-14 * expect.max(1e-300), "{t}: {got} vs {expect}");
        let weak = double_exponential_bound(t, -0.5, km, 1.0).unwrap();
        assert!((weak - expect).abs() <= 1e-14 * expect.max(1e-300));
    }
    assert!(radius_lower_bound(0.0, -0.5, 1.0, 0.5).is_err());
    assert!(radius_lower_bound(0.0, 0.5, 1.0, 1.5).is_err());
}

#[test]
fn weak_bound_is_weaker() {
    for &mu in &[1.0, 2.0, 10.0] {
        for &t in &[0.0, 1e-3, 1e-2] {
            let strong = radius_lower_bound(t, -0.2, 0.3, mu).unwrap();
            let weak = double_exponential_bound(t, -0.2, 0.3, mu).unwrap();
            assert!(weak <= strong * (1.0 + 1e-14));
        }
    }
}

#[test]
fn time_derivative_exact_on_quadratics() {
    let times = [0.0, 0.1, 0.25, 0.3, 0.7, 0.71];
    let f = |t: f64| 3.0 - 2.0 * t + 5.0 * t * t;
    let vals: Vec<f64> = times.iter().map(|&t| f(t)).collect();
    for (t, d) in times.iter().zip(time_derivative(&times, &vals)) {
        assert!((d - (-2.0 + 10.0 * t)).abs() < 1e-10);
    }
    assert_eq!(time_derivative(&[1.0], &[4.0]), vec![0.0]);
    assert_eq!(time_derivative(&[0.0, 2.0], &[1.0, 5.0]), vec![2.0, 2.0]);
}

#[test]
fn i_functional_matches_quadrature() {
    let grid = Grid::new(20.0, 512).unwrap();
    let u = gaussian(&grid, 1.5);
    let s = u.spectrum();
    let d = |j| s.derivative(j).unwrap().field();
    let (u1, u2, u3) = (d(1), d(2), d(3));
    let dx = grid.dx();
    let quad: f64 = (0..grid.len())
        .map(|i| {
            let (a, b, c, e) = (u.values()[i], u1.values()[i], u2.values()[i], u3.values()[i]);
            0.25 * (a * a + b * b) + 0.5 * (b * b + c * c) + 0.5 * (c * c + e * e)
        })
        .sum::<f64>()
        * dx;
    assert!((i_functional(&s) - quad).abs() < 1e-12 * quad);
    // u even: the rate integrand is odd.
    assert!(i_functional_rate(&u).unwrap().abs() < 1e-12);
}

#[test]
fn zero_data_passes_everything() {
    let grid = Grid::new(20.0, 128).unwrap();
    let s = run(1, Field::zeros(&grid), 0.01, 0.1, 2);
    for claim in CLAIM_IDS {
        let r = run_check(claim, &s).unwrap();
        assert!(r.verdict.is_acceptable(), "{claim}: {r:?}");
    }
    assert_eq!(check_support_spreading(&s).verdict, Verdict::Inapplicable);
    assert_eq!(check_mean_conservation(&s).verdict, Verdict::Pass);
    assert!(s.records.iter().all(|r| r.support.is_none() && r.di_dt_residual == 0.0));
}

#[test]
fn constant_state_has_zero_rate() {
    let grid = Grid::new(10.0, 64).unwrap();
    let u = Field::constant(&grid, 0.7);
    let states: Vec<_> = (0..4).map(|i| State { t: i as f64 * 0.1, u: u.clone() }).collect();
    let s = series_of(1, &states, DiagnosticsSpec::default());
    assert!(s.records.iter().all(|r| r.di_dt_integral == 0.0 && r.di_dt_residual.abs() < 1e-12));
}

#[test]
fn odd_data_conserves_zero_mean() {
    let grid = Grid::new(20.0, 256).unwrap();
    let u = Field::from_fn(&grid, |x: f64| x * (-x * x).exp()).unwrap();
    let s = run(1, u, 1e-2, 0.2, 5);
    let r = check_mean_conservation(&s);
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    assert!(r.notes.iter().any(|n| n.contains("max(1")));
}

#[test]
fn mixed_sign_is_inapplicable() {
    let grid = Grid::new(20.0, 256).unwrap();
    let u = Field::from_fn(&grid, |x: f64| x * (-x * x).exp()).unwrap();
    let s = series_of(1, &[State { t: 0.0, u }], DiagnosticsSpec::default());
    for r in [check_sign_invariance(&s), check_slope_bound(&s), check_h3_growth(&s)] {
        assert_eq!(r.verdict, Verdict::Inapplicable, "{r:?}");
    }
}

#[test]
fn k_other_than_one_is_inapplicable() {
    let grid = Grid::new(20.0, 256).unwrap();
    let s = series_of(2, &[State { t: 0.0, u: gaussian(&grid, 1.0) }], DiagnosticsSpec::default());
    for claim in ["mean_conservation", "l1_conservation", "slope_bound", "h3_growth", "i_functional_identity"] {
        assert_eq!(run_check(claim, &s).unwrap().verdict, Verdict::Inapplicable, "{claim}");
    }
}

#[test]
fn undecayed_data_is_inapplicable() {
    let grid = Grid::new(5.0, 128).unwrap();
    let s = series_of(1, &[State { t: 0.0, u: gaussian(&grid, 3.0) }], DiagnosticsSpec::default());
    assert_eq!(check_mean_conservation(&s).verdict, Verdict::Inapplicable);
}

#[test]
fn diverged_run_reports_diverged() {
    let grid = Grid::new(20.0, 128).unwrap();
    let mut s = series_of(1, &[State { t: 0.0, u: gaussian(&grid, 1.0) }], DiagnosticsSpec::default());
    s.status = RunStatus::Diverged { t: 0.1, reason: "test".into() };
    for claim in CLAIM_IDS {
        assert_eq!(run_check(claim, &s).unwrap().verdict, Verdict::Diverged, "{claim}");
    }
    assert_eq!(check_radius_bound(&s, -0.5, 1.0).verdict, Verdict::Diverged);
}

#[test]
fn frozen_bump_does_not_spread() {
    let grid = Grid::new(20.0, 512).unwrap();
    let u0: Field<f64> = sample(&grid, Family::SmoothBump, &FamilyParams::default()).unwrap();
    let frozen = [State { t: 0.0, u: u0.clone() }, State { t: 1e-3, u: u0.clone() }];
    let r = check_support_spreading(&series_of(1, &frozen, DiagnosticsSpec::default()));
    assert_eq!(r.verdict, Verdict::Fail, "{r:?}");

    let s = run(1, u0, 1e-3, 1e-3, 1);
    let r = check_support_spreading(&s);
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    assert!(r.measured > 0.0);
}

#[test]
fn energy_ratio_is_finite() {
    let grid = Grid::new(20.0, 256).unwrap();
    let spec = DiagnosticsSpec { sobolev: vec![2.0], ..DiagnosticsSpec::default() };
    let cfg = SolverConfig { dt: 1e-2, t_end: 0.2, snapshot_stride: 2, ..SolverConfig::default() };
    let mut rec = DiagnosticsRecorder::new(1, spec);
    let u0 = gaussian(&grid, 1.0);
    integrate(State { t: 0.0, u: u0 }, &cfg, ModelParams::new(1).unwrap(), &mut [&mut rec]).unwrap();
    let s = rec.finish(RunStatus::Completed).unwrap();
    let r = check_energy_estimate(&s);
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.measured > 0.0 && r.measured.is_finite());
    assert_eq!(r.parameters["s"], serde_json::json!(2.0));
}

#[test]
fn short_k1_run_passes_signed_checks() {
    let grid = Grid::new(20.0, 256).unwrap();
    let u0 = sample(&grid, Family::GaussianMomentum, &FamilyParams::default()).unwrap();
    let s = run(1, u0, 1e-2, 0.3, 1);
    for claim in CLAIM_IDS.iter().filter(|c| **c != "support_spreading") {
        let r = run_check(claim, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{claim}: {r:?}");
    }
}

#[test]
fn negative_momentum_mirrors() {
    let grid = Grid::new(20.0, 256).unwrap();
    let p = FamilyParams { sign: -1, ..FamilyParams::default() };
    let u0 = sample(&grid, Family::GaussianMomentum, &p).unwrap();
    let s = run(1, u0, 1e-2, 0.2, 2);
    for claim in ["sign_invariance", "slope_bound", "h3_growth", "l1_conservation"] {
        let r = run_check(claim, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{claim}: {r:?}");
    }
}

#[test]
fn report_serializes_snake_case() {
    let r = TheoremReport::new("x").param("k", 1).judge(0.5, 1.0);
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["claim_id"], "x");
    let back: TheoremReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn transport_of_zero_flow() {
    let grid = Grid::new(10.0, 64).unwrap();
    let states: Vec<_> = (0..3).map(|i| State { t: i as f64, u: Field::zeros(&grid) }).collect();
    let r = check_transport(&states, ModelParams::new(1).unwrap(), 1e-12).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.measured <= 1e-12);
}

#[test]
fn km_norm_column() {
    let grid = Grid::new(20.0, 256).unwrap();
    let u = gaussian(&grid, 1.0);
    let spec = DiagnosticsSpec {
        kato_masuda: vec![KatoMasudaSpec { sigma: -0.5, s: 2.0, max_j: 6 }],
        ..DiagnosticsSpec::default()
    };
    let s = series_of(1, &[State { t: 0.0, u: u.clone() }], spec);
    let direct = initial_km_norm(&u, -0.5, NormTruncation { max_j: 6 }).unwrap();
    assert!((s.records[0].km_sq[0].sqrt() - direct).abs() < 1e-14 * direct);
}
