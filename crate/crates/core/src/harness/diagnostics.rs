//! Per-snapshot diagnostics of a trajectory.

use serde::{Deserialize, Serialize};

use crate::dynamics::{momentum, Observer, RunStatus, State};
use crate::error::Result;
use crate::scalar::{lit, to_f64, Real};
use crate::spaces::{analyticity_radius, c1_norm, kato_masuda_sq, l1_norm, NormTruncation};
use crate::spectral::{to_spectrum, Field, Spectrum};

use super::tolerances::SUPPORT_EPS;

/// One Kato-Masuda column: `||u||^2_{sigma,s}` truncated at `max_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KatoMasudaSpec {
    pub sigma: f64,
    pub s: f64,
    #[serde(default = "default_max_j")]
    pub max_j: usize,
}

fn default_max_j() -> usize {
    NormTruncation::default().max_j
}

/// What to record beyond the fixed set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSpec {
    /// Extra Sobolev indices, one `hs_*` column each.
    pub sobolev: Vec<f64>,
    pub kato_masuda: Vec<KatoMasudaSpec>,
    /// Support threshold relative to `max |u0|`.
    pub support_eps: f64,
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        Self {
            sobolev: Vec::new(),
            kato_masuda: Vec::new(),
            support_eps: SUPPORT_EPS,
        }
    }
}

/// Diagnostics of `u(t)` at one snapshot.
///
/// `radius_fit` is `+inf` when the fit flags super-exponential decay and
/// NaN for the zero field; `support` is `None` when nothing exceeds the
/// threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    /// `int u dx`.
    pub mean_u: f64,
    pub l1_u: f64,
    pub l1_m: f64,
    pub min_m: f64,
    pub max_m: f64,
    pub min_u: f64,
    pub max_u: f64,
    pub min_neg_ux: f64,
    pub max_neg_ux: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub hs: Vec<f64>,
    pub c1: f64,
    pub i_functional: f64,
    /// `int (-u_x)(2 u_xx^2 + u_xxx^2 / 2) dx`.
    pub di_dt_integral: f64,
    /// Differenced `dI/dt` minus `di_dt_integral`; filled in by [`DiagnosticsRecorder::finish`].
    pub di_dt_residual: f64,
    pub support: Option<(f64, f64)>,
    pub radius_fit: f64,
    pub radius_fit_quality: f64,
    pub km_sq: Vec<f64>,
    /// Largest of the two edge samples relative to `max |u|`.
    pub edge_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    pub k: u32,
    pub half_length: f64,
    pub n_points: usize,
    pub spec: DiagnosticsSpec,
    /// Absolute support threshold, `support_eps * max |u0|`.
    pub support_threshold: f64,
    pub records: Vec<DiagnosticRecord>,
    pub status: RunStatus,
}

impl DiagnosticsSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn initial(&self) -> Option<&DiagnosticRecord> {
        self.records.first()
    }

    pub fn is_diverged(&self) -> bool {
        self.status.is_diverged()
    }
}

/// Derivative of the quadratic through three points, evaluated at `t`.
fn quadratic_slope(ts: [f64; 3], fs: [f64; 3], t: f64) -> f64 {
    let [t0, t1, t2] = ts;
    let [f0, f1, f2] = fs;
    f0 * ((t - t1) + (t - t2)) / ((t0 - t1) * (t0 - t2))
        + f1 * ((t - t0) + (t - t2)) / ((t1 - t0) * (t1 - t2))
        + f2 * ((t - t0) + (t - t1)) / ((t2 - t0) * (t2 - t1))
}

/// Second order finite-difference derivative of samples at increasing,
/// possibly uneven, times. Interior points are centred; the two ends use
/// one-sided three-point stencils. Two samples give their secant slope and
/// a single sample gives zero.
pub fn time_derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let n = times.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        2 => {
            let s = (values[1] - values[0]) / (times[1] - times[0]);
            vec![s, s]
        }
        _ => (0..n)
            .map(|i| {
                let c = i.clamp(1, n - 2);
                quadratic_slope(
                    [times[c - 1], times[c], times[c + 1]],
                    [values[c - 1], values[c], values[c + 1]],
                    times[i],
                )
            })
            .collect(),
    }
}

/// `I[u] = int u^2/4 + 3 u_x^2/4 + u_xx^2 + u_xxx^2/2 dx`, summed in Fourier space.
pub fn i_functional<T: Real>(spec: &Spectrum<T>) -> T {
    let quarter = lit::<T>(0.25);
    let half = lit::<T>(0.5);
    spec.weighted_energy(|xi| {
        let x2 = xi * xi;
        let x4 = x2 * x2;
        quarter * (T::one() + x2) + half * (x2 + x4) + half * (x4 + x4 * x2)
    })
}

/// `int (-u_x)(2 u_xx^2 + u_xxx^2/2) dx` on the grid.
pub fn i_functional_rate<T: Real>(u: &Field<T>) -> Result<T> {
    let spec = to_spectrum(u);
    let ux = spec.derivative(1)?.field();
    let uxx = spec.derivative(2)?.field();
    let uxxx = spec.derivative(3)?.field();
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let dx = u.grid().dx();
    Ok(ux
        .values()
        .iter()
        .zip(uxx.values())
        .zip(uxxx.values())
        .map(|((&a, &b), &c)| -a * (two * b * b + half * c * c))
        .sum::<T>()
        * dx)
}

/// Smallest interval containing every node where `|u| > threshold`.
pub fn support_interval<T: Real>(u: &Field<T>, threshold: T) -> Option<(f64, f64)> {
    let v = u.values();
    let first = v.iter().position(|x| x.abs() > threshold)?;
    let last = v.iter().rposition(|x| x.abs() > threshold)?;
    let g = u.grid();
    Some((to_f64(g.node(first)), to_f64(g.node(last))))
}

/// Computes every diagnostic of `u` except the time-differenced residual.
pub fn record<T: Real>(
    t: T,
    u: &Field<T>,
    spec: &DiagnosticsSpec,
    support_threshold: T,
) -> Result<DiagnosticRecord> {
    let su = to_spectrum(u);
    let m = momentum(u);
    let ux = su.derivative(1)?.field();
    let sob = |s: f64| to_f64(su.sobolev_norm_sq(lit(s)).sqrt());
    let max_abs = u.max_abs();
    let edge_ratio = if max_abs > T::zero() {
        let v = u.values();
        to_f64(v[0].abs().max(v[v.len() - 1].abs()) / max_abs)
    } else {
        0.0
    };
    let (radius_fit, radius_fit_quality) = if max_abs > T::zero() {
        let est = analyticity_radius(u)?;
        (to_f64(est.radius.value()), to_f64(est.fit_quality))
    } else {
        (f64::NAN, 0.0)
    };
    let km_sq = spec
        .kato_masuda
        .iter()
        .map(|km| {
            kato_masuda_sq(u, lit(km.sigma), lit(km.s), NormTruncation { max_j: km.max_j })
                .map(to_f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticRecord {
        t: to_f64(t),
        mean_u: to_f64(u.integral()),
        l1_u: to_f64(l1_norm(u)),
        l1_m: to_f64(l1_norm(&m)),
        min_m: to_f64(m.min()),
        max_m: to_f64(m.max()),
        min_u: to_f64(u.min()),
        max_u: to_f64(u.max()),
        min_neg_ux: to_f64(-ux.max()) + 0.0,
        max_neg_ux: to_f64(-ux.min()) + 0.0,
        h1: sob(1.0),
        h2: sob(2.0),
        h3: sob(3.0),
        hs: spec.sobolev.iter().map(|&s| sob(s)).collect(),
        c1: to_f64(c1_norm(u)),
        i_functional: to_f64(i_functional(&su)),
        di_dt_integral: to_f64(i_functional_rate(u)?),
        di_dt_residual: 0.0,
        support: support_interval(u, support_threshold),
        radius_fit,
        radius_fit_quality,
        km_sq,
        edge_ratio,
    })
}

/// [`Observer`] that turns every snapshot into a [`DiagnosticRecord`].
///
/// The support threshold is fixed from the first observed state.
#[derive(Debug)]
pub struct DiagnosticsRecorder<T: Real> {
    k: u32,
    spec: DiagnosticsSpec,
    threshold: Option<T>,
    grid: Option<(f64, usize)>,
    records: Vec<DiagnosticRecord>,
    error: Option<crate::Error>,
}

impl<T: Real> DiagnosticsRecorder<T> {
    pub fn new(k: u32, spec: DiagnosticsSpec) -> Self {
        Self {
            k,
            spec,
            threshold: None,
            grid: None,
            records: Vec::new(),
            error: None,
        }
    }

    pub fn records(&self) -> &[DiagnosticRecord] {
        &self.records
    }

    /// Fills in the `dI/dt` residuals and returns the series.
    pub fn finish(self, status: RunStatus) -> Result<DiagnosticsSeries> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let mut records = self.records;
        let times: Vec<f64> = records.iter().map(|r| r.t).collect();
        let values: Vec<f64> = records.iter().map(|r| r.i_functional).collect();
        let rates = time_derivative(&times, &values);
        for (r, d) in records.iter_mut().zip(rates) {
            r.di_dt_residual = d - r.di_dt_integral;
        }
        let (half_length, n_points) = self.grid.unwrap_or((0.0, 0));
        Ok(DiagnosticsSeries {
            k: self.k,
            half_length,
            n_points,
            support_threshold: self.threshold.map(to_f64).unwrap_or(0.0),
            spec: self.spec,
            records,
            status,
        })
    }
}

impl<T: Real> Observer<T> for DiagnosticsRecorder<T> {
    fn observe(&mut self, state: &State<T>) {
        if self.error.is_some() {
            return;
        }
        let threshold = *self
            .threshold
            .get_or_insert_with(|| lit::<T>(self.spec.support_eps) * state.u.max_abs());
        self.grid
            .get_or_insert_with(|| (to_f64(state.u.grid().half_length()), state.u.len()));
        match record(state.t, &state.u, &self.spec, threshold) {
            Ok(r) => self.records.push(r),
            Err(e) => self.error = Some(e),
        }
    }
}
