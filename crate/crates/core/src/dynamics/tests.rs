use std::f64::consts::PI;

use super::*;
use crate::spectral::{convolution_oracle, derivative, Grid};
use crate::testutil::{band_limited, gaussian, rng};

fn grid(l: f64, n: usize) -> Grid<f64> {
    Grid::new(l, n).unwrap()
}

fn k(k: u32) -> ModelParams {
    ModelParams::new(k).unwrap()
}

fn gaussian_momentum_data(g: &Grid<f64>) -> Field<f64> {
    velocity_from_momentum(&gaussian(g, 1.0))
}

#[test]
fn zero_and_constants_are_steady() {
    let g = grid(10.0, 128);
    for kk in 1..=4 {
        assert_eq!(rhs(&Field::zeros(&g), k(kk)).unwrap().max_abs(), 0.0);
        for c in [-2.5, 0.3, 1.0, 7.0] {
            let f = rhs(&Field::constant(&g, c), k(kk)).unwrap();
            assert_eq!(f.max_abs(), 0.0, "k={kk} c={c}");
        }
    }
    assert!(ModelParams::new(0).is_err());
}

#[test]
fn k1_reduces_to_camassa_holm_type_form() {
    // -1/2 d_x(u^2) - 3/2 d_x (1 - d_x^2)^{-1} u_x^2, built from the public operators.
    let g = grid(20.0, 512);
    let u = gaussian_momentum_data(&g);
    let ux = derivative(&u, 1).unwrap();
    let sq = u.map(|v| v * v);
    let ux2 = ux.map(|v| v * v);
    let a = derivative(&sq, 1).unwrap();
    let b = derivative(&helmholtz_inverse(&ux2), 1).unwrap();
    let reference = a.zip_with(&b, |a, b| -0.5 * a - 1.5 * b).unwrap();
    let got = rhs(&u, k(1)).unwrap();
    assert!(got.max_abs_diff(&reference).unwrap() <= 1e-12 * (1.0 + reference.max_abs()));
}

/// `(1 - d_x^2)^{-1}(-u^k m_x)` evaluated with the given inverse.
fn local_form(u: &Field<f64>, kk: u32, invert: impl Fn(&Field<f64>) -> Field<f64>) -> Field<f64> {
    let m = momentum(u);
    let mx = derivative(&m, 1).unwrap();
    let local = u.zip_with(&mx, |v, d| -v.powi(kk as i32) * d).unwrap();
    invert(&local)
}

#[test]
fn k2_matches_green_function_quadrature_of_local_form() {
    let g = grid(20.0, 512);
    let u = gaussian(&g, 1.0);
    let oracle = local_form(&u, 2, |f| convolution_oracle(f).field);
    let got = rhs(&u, k(2)).unwrap();
    let err = got.max_abs_diff(&oracle).unwrap();
    assert!(err <= 1e-5, "err {err}");
}

#[test]
fn local_and_nonlocal_forms_agree_spectrally() {
    let g = grid(20.0, 512);
    let u = gaussian(&g, 1.5).map(|v| 0.8 * v);
    for kk in 1..=4 {
        let reference = local_form(&u, kk, helmholtz_inverse);
        let got = rhs(&u, k(kk)).unwrap();
        let err = got.max_abs_diff(&reference).unwrap();
        assert!(err <= 1e-10, "k={kk} err {err}");
    }
}

#[test]
fn momentum_maps() {
    let g = grid(PI, 32);
    let u = Field::from_fn(&g, f64::cos).unwrap();
    let m = momentum(&u);
    for (x, v) in g.nodes().into_iter().zip(m.values()) {
        assert!((v - 2.0 * x.cos()).abs() < 1e-13);
    }
    assert_eq!(momentum(&Field::zeros(&g)).max_abs(), 0.0);
    let mut r = rng(17);
    let g = grid(8.0, 128);
    for _ in 0..10 {
        let u = band_limited(&g, 40, &mut r);
        let back = velocity_from_momentum(&momentum(&u));
        assert!(back.max_abs_diff(&u).unwrap() <= 1e-10);
    }
}

#[test]
fn cfl_formula() {
    let g = grid(20.0, 512);
    let dx = g.dx();
    assert_eq!(cfl_dt(&Field::zeros(&g), k(1)), 0.5 * dx);
    let u = Field::from_fn(&g, |x| 2.0 * (-x * x).exp()).unwrap();
    assert!((cfl_dt(&u, k(2)) - 0.5 * dx / 4.0).abs() < 1e-15);
    let mut last = f64::INFINITY;
    for amp in [0.1, 0.5, 1.0, 1.5, 3.0, 10.0] {
        let c = cfl_dt(&u.map(|v| v * amp / 2.0), k(3));
        assert!(c <= last);
        last = c;
    }
}

#[test]
fn zero_data_stays_zero() {
    let g = grid(10.0, 64);
    let cfg = SolverConfig { dt: 0.01, t_end: 0.1, ..Default::default() };
    let mut rec = SnapshotRecorder::new();
    let out = integrate(
        State { t: 0.0, u: Field::zeros(&g) },
        &cfg,
        k(2),
        &mut [&mut rec],
    )
    .unwrap();
    assert_eq!(out.status, RunStatus::Completed);
    assert_eq!(out.steps, 10);
    assert_eq!(rec.states.len(), 11);
    assert!(rec.states.iter().all(|s| s.u.max_abs() == 0.0));
}

#[test]
fn stride_and_final_snapshot() {
    let g = grid(20.0, 128);
    let u = gaussian_momentum_data(&g);
    let cfg = SolverConfig { dt: 0.01, t_end: 0.105, snapshot_stride: 4, ..Default::default() };
    let mut rec = SnapshotRecorder::new();
    let out = integrate(State { t: 0.0, u }, &cfg, k(1), &mut [&mut rec]).unwrap();
    assert_eq!(out.steps, 11);
    let times: Vec<f64> = rec.states.iter().map(|s| s.t).collect();
    assert_eq!(times.len(), 4);
    assert!((times[1] - 0.04).abs() < 1e-15);
    assert!((times[2] - 0.08).abs() < 1e-15);
    assert!((times[3] - 0.105).abs() < 1e-15);
}

#[test]
fn zero_end_time_observes_only_initial_state() {
    let g = grid(20.0, 64);
    let cfg = SolverConfig { t_end: 0.0, ..Default::default() };
    let mut rec = SnapshotRecorder::new();
    let out = integrate(State { t: 0.0, u: gaussian(&g, 1.0) }, &cfg, k(1), &mut [&mut rec]).unwrap();
    assert_eq!(out.steps, 0);
    assert_eq!(rec.states.len(), 1);
}

#[test]
fn blowup_guard_reports_divergence() {
    let g = grid(20.0, 128);
    let cfg = SolverConfig { dt: 0.01, t_end: 1.0, blowup_factor: 0.5, ..Default::default() };
    let out = integrate(State { t: 0.0, u: gaussian(&g, 1.0) }, &cfg, k(1), &mut []).unwrap();
    assert!(out.status.is_diverged());
    assert_eq!(out.steps, 0);
}

#[test]
fn invalid_config_is_rejected() {
    let g = grid(20.0, 64);
    let s = State { t: 0.0, u: gaussian(&g, 1.0) };
    for cfg in [
        SolverConfig { dt: 0.0, ..Default::default() },
        SolverConfig { dealias_fraction: 0.0, ..Default::default() },
        SolverConfig { snapshot_stride: 0, ..Default::default() },
        SolverConfig { c_m: -1.0, ..Default::default() },
    ] {
        assert!(integrate(s.clone(), &cfg, k(1), &mut []).is_err());
    }
}

#[test]
fn forward_backward_step_defect_is_at_least_fifth_order() {
    let g = grid(20.0, 256);
    let s = State { t: 0.0, u: gaussian_momentum_data(&g) };
    let defect = |dt: f64| {
        let f = rk4_step_dt(&s, dt, k(1), 2.0 / 3.0, false).unwrap();
        let b = rk4_step_dt(&f, -dt, k(1), 2.0 / 3.0, false).unwrap();
        b.u.max_abs_diff(&s.u).unwrap()
    };
    let (e1, e2) = (defect(0.2), defect(0.1));
    let order = (e1 / e2).log2();
    // The h^5 error terms of the two steps have opposite signs and cancel,
    // so the observed order is close to six.
    assert!((4.5..6.5).contains(&order), "order {order}");
}

#[test]
fn rk4_converges_at_fourth_order() {
    let g = grid(20.0, 256);
    let u0 = gaussian_momentum_data(&g);
    let run = |dt: f64| {
        let cfg = SolverConfig { dt, t_end: 1.0, ..Default::default() };
        integrate(State { t: 0.0, u: u0.clone() }, &cfg, k(1), &mut [])
            .unwrap()
            .final_state
            .u
    };
    let reference = run(0.0125);
    let e1 = run(0.1).max_abs_diff(&reference).unwrap();
    let e2 = run(0.05).max_abs_diff(&reference).unwrap();
    let ratio = e1 / e2;
    assert!((13.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn filter_damps_only_the_top_of_the_spectrum() {
    let g = grid(20.0, 256);
    let u = gaussian_momentum_data(&g);
    let s = State { t: 0.0, u: u.clone() };
    let plain = rk4_step_dt(&s, 0.01, k(1), 2.0 / 3.0, false).unwrap();
    let filtered = rk4_step_dt(&s, 0.01, k(1), 2.0 / 3.0, true).unwrap();
    assert!(plain.u.max_abs_diff(&filtered.u).unwrap() < 1e-12);
}

#[test]
fn f32_step_runs() {
    let g = Grid::<f32>::new(20.0, 128).unwrap();
    let u = velocity_from_momentum(&Field::from_fn(&g, |x| (-x * x).exp()).unwrap());
    let s = State { t: 0.0f32, u };
    let next = rk4_step_dt(&s, 0.01, k(1), 2.0 / 3.0, false).unwrap();
    assert!(next.u.is_finite());
}
