//! Right-hand side of `u_t = F(u)` for `m_t + u^k m_x = 0`, momentum maps and
//! classical RK4 time stepping.
//!
//! `F(u) = -d_x[u^{k+1}/(k+1) + 3/2 (1-d_x^2)^{-1}(k u^{k-1} u_x^2)]
//!         + (1-d_x^2)^{-1}[k(k-1)/2 u^{k-2} u_x^3]`

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::spaces::sobolev_norm;
use crate::spectral::{helmholtz, helmholtz_inverse, to_field, to_spectrum, Field, Spectrum};

pub const DEFAULT_DEALIAS_FRACTION: f64 = 2.0 / 3.0;
pub const FILTER_STRENGTH: f64 = 36.0;
pub const FILTER_ORDER: i32 = 36;
pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e6;

/// Nonlinearity exponent `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub k: u32,
}

impl ModelParams {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("nonlinearity exponent k must be >= 1".into()));
        }
        Ok(Self { k })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub dt: T,
    pub t_end: T,
    pub dealias_fraction: T,
    pub filter_on: bool,
    pub c_m: T,
    pub c_s: T,
    pub snapshot_stride: usize,
    /// Integration stops once `||u||_{H^1}` exceeds this multiple of its initial value.
    pub blowup_factor: T,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            dt: lit(1e-3),
            t_end: T::one(),
            dealias_fraction: lit(DEFAULT_DEALIAS_FRACTION),
            filter_on: false,
            c_m: T::one(),
            c_s: T::one(),
            snapshot_stride: 1,
            blowup_factor: lit(DEFAULT_BLOWUP_FACTOR),
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end >= T::zero() && self.t_end.is_finite()) {
            return bad(format!("t_end must be >= 0, got {}", self.t_end));
        }
        if !(self.dealias_fraction > T::zero() && self.dealias_fraction <= T::one()) {
            return bad(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            ));
        }
        if !(self.c_m > T::zero() && self.c_s > T::zero()) {
            return bad("c_m and c_s must be positive".into());
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct State<T: Real> {
    pub t: T,
    pub u: Field<T>,
}

/// `m = u - u_xx`.
pub fn momentum<T: Real>(u: &Field<T>) -> Field<T> {
    helmholtz(u)
}

/// `u = (1 - d_x^2)^{-1} m`, i.e. `u = g * m` with `g = e^{-|x|}/2`.
pub fn velocity_from_momentum<T: Real>(m: &Field<T>) -> Field<T> {
    helmholtz_inverse(m)
}

/// `F(u)` with the default 2/3 dealiasing.
pub fn rhs<T: Real>(u: &Field<T>, p: ModelParams) -> Result<Field<T>> {
    rhs_dealiased(u, p, lit(DEFAULT_DEALIAS_FRACTION))
}

/// `F(u)` with every nonlinear product truncated to `|j| <= fraction N/2`.
pub fn rhs_dealiased<T: Real>(u: &Field<T>, p: ModelParams, fraction: T) -> Result<Field<T>> {
    let spec = rhs_spectrum(u, p, fraction)?;
    let out = to_field(&spec);
    if !out.is_finite() {
        return Err(Error::NonFinite("rhs"));
    }
    Ok(out)
}

fn rhs_spectrum<T: Real>(u: &Field<T>, p: ModelParams, fraction: T) -> Result<Spectrum<T>> {
    let k = p.k as i32;
    let kf = lit::<T>(p.k as f64);
    let grid = u.grid();
    let ux = to_field(&to_spectrum(u).derivative(1)?);
    let uv = u.values();
    let uxv = ux.values();

    let flux: Vec<T> = uv.iter().map(|&v| v.powi(k + 1) / (kf + T::one())).collect();
    let slope: Vec<T> = uv
        .iter()
        .zip(uxv)
        .map(|(&v, &d)| kf * v.powi(k - 1) * d * d)
        .collect();
    if flux.iter().chain(&slope).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("rhs products"));
    }
    let flux = to_spectrum(&Field::new(grid.clone(), flux)?).dealias(fraction);
    let slope = to_spectrum(&Field::new(grid.clone(), slope)?).dealias(fraction);

    // The cubic term carries k(k-1)/2, which vanishes at k = 1; u^{k-2} is
    // never formed in that case.
    let cubic = if p.k >= 2 {
        let c = kf * (kf - T::one()) / lit(2.0);
        let vals: Vec<T> = uv
            .iter()
            .zip(uxv)
            .map(|(&v, &d)| c * v.powi(k - 2) * d * d * d)
            .collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("rhs products"));
        }
        Some(to_spectrum(&Field::new(grid.clone(), vals)?).dealias(fraction))
    } else {
        None
    };

    let three_halves = lit::<T>(1.5);
    let coeffs = (0..grid.len())
        .map(|i| {
            let xi = grid.wavenumber(i);
            let inv = T::one() / (T::one() + xi * xi);
            let inner = flux.coeffs()[i] + slope.coeffs()[i] * (three_halves * inv);
            let mut out = -(inner * Complex::new(T::zero(), xi));
            if let Some(c) = &cubic {
                out = out + c.coeffs()[i] * inv;
            }
            out
        })
        .collect();
    Spectrum::new(grid.clone(), coeffs)
}

/// Advisory step bound `0.5 dx / max(1, max|u|^k)`.
pub fn cfl_dt<T: Real>(u: &Field<T>, p: ModelParams) -> T {
    let speed = u.max_abs().powi(p.k as i32);
    lit::<T>(0.5) * u.grid().dx() / speed.max(T::one())
}

/// One classical RK4 step of size `dt` (negative `dt` steps backwards).
pub fn rk4_step_dt<T: Real>(
    s: &State<T>,
    dt: T,
    p: ModelParams,
    dealias_fraction: T,
    filter_on: bool,
) -> Result<State<T>> {
    let half = dt / lit(2.0);
    let f = |u: &Field<T>| rhs_dealiased(u, p, dealias_fraction);
    let k1 = f(&s.u)?;
    let k2 = f(&s.u.axpy(half, &k1)?)?;
    let k3 = f(&s.u.axpy(half, &k2)?)?;
    let k4 = f(&s.u.axpy(dt, &k3)?)?;
    let sixth = dt / lit(6.0);
    let two = lit::<T>(2.0);
    let values: Vec<T> = (0..s.u.len())
        .map(|i| {
            s.u.values()[i]
                + sixth
                    * (k1.values()[i]
                        + two * k2.values()[i]
                        + two * k3.values()[i]
                        + k4.values()[i])
        })
        .collect();
    let mut u = Field::new(s.u.grid().clone(), values).map_err(|_| Error::NonFinite("rk4 stage"))?;
    if filter_on {
        u = to_field(&to_spectrum(&u).exponential_filter(lit(FILTER_STRENGTH), FILTER_ORDER));
    }
    Ok(State { t: s.t + dt, u })
}

/// One step with the configured `dt`, dealiasing and filter.
pub fn rk4_step<T: Real>(s: &State<T>, cfg: &SolverConfig<T>, p: ModelParams) -> Result<State<T>> {
    rk4_step_dt(s, cfg.dt, p, cfg.dealias_fraction, cfg.filter_on)
}

/// Receives the state at every snapshot of [`integrate`].
pub trait Observer<T: Real> {
    fn observe(&mut self, state: &State<T>);
}

/// Keeps every observed state.
#[derive(Clone, Debug, Default)]
pub struct SnapshotRecorder<T: Real> {
    pub states: Vec<State<T>>,
}

impl<T: Real> SnapshotRecorder<T> {
    pub fn new() -> Self {
        Self { states: Vec::new() }
    }
}

impl<T: Real> Observer<T> for SnapshotRecorder<T> {
    fn observe(&mut self, state: &State<T>) {
        self.states.push(state.clone());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Diverged { t: f64, reason: String },
}

impl RunStatus {
    pub fn is_diverged(&self) -> bool {
        matches!(self, RunStatus::Diverged { .. })
    }
}

#[derive(Clone, Debug)]
pub struct Integration<T: Real> {
    pub status: RunStatus,
    /// Last state that passed the divergence checks.
    pub final_state: State<T>,
    pub steps: usize,
    pub warnings: Vec<String>,
}

/// Integrates from `initial` to `cfg.t_end`.
///
/// Observers see the initial state, every `snapshot_stride`-th step and the
/// final state. Step `n` ends at `min(n dt, t_end)`, so the last step may be
/// shorter. Stops early with [`RunStatus::Diverged`] on non-finite values or
/// when the `H^1` norm grows past `blowup_factor` times its initial value.
pub fn integrate<T: Real>(
    initial: State<T>,
    cfg: &SolverConfig<T>,
    p: ModelParams,
    observers: &mut [&mut dyn Observer<T>],
) -> Result<Integration<T>> {
    cfg.validate()?;
    if !initial.u.is_finite() {
        return Err(Error::NonFinite("initial data"));
    }
    let mut warnings = Vec::new();
    let cfl = cfl_dt(&initial.u, p);
    if cfg.dt > cfl {
        warnings.push(format!("dt = {} exceeds the advisory CFL bound {}", cfg.dt, cfl));
    }

    let t0 = initial.t;
    let n_steps = {
        let ratio = to_f64(cfg.t_end / cfg.dt);
        let n = ratio.round();
        if (ratio - n).abs() <= 1e-9 * ratio.max(1.0) {
            n as usize
        } else {
            ratio.ceil() as usize
        }
    };
    let h1_0 = sobolev_norm(&initial.u, T::one());
    let limit = cfg.blowup_factor * h1_0;

    for obs in observers.iter_mut() {
        obs.observe(&initial);
    }
    let mut state = initial;
    let mut status = RunStatus::Completed;
    let mut steps = 0;
    for n in 1..=n_steps {
        let t_next = (from_usize::<T>(n) * cfg.dt).min(cfg.t_end);
        let dt = t_next - (state.t - t0);
        let next = match rk4_step_dt(&state, dt, p, cfg.dealias_fraction, cfg.filter_on) {
            Ok(s) => s,
            Err(Error::NonFinite(what)) => {
                status = RunStatus::Diverged {
                    t: to_f64(state.t),
                    reason: format!("non-finite values in {what}"),
                };
                break;
            }
            Err(e) => return Err(e),
        };
        let h1 = sobolev_norm(&next.u, T::one());
        if !h1.is_finite() || (h1_0 > T::zero() && h1 > limit) {
            status = RunStatus::Diverged {
                t: to_f64(t0 + t_next),
                reason: format!("H1 norm {h1} exceeded {} x initial {h1_0}", cfg.blowup_factor),
            };
            break;
        }
        state = State { t: t0 + t_next, u: next.u };
        steps = n;
        if n % cfg.snapshot_stride == 0 || n == n_steps {
            for obs in observers.iter_mut() {
                obs.observe(&state);
            }
        }
    }
    Ok(Integration {
        status,
        final_state: state,
        steps,
        warnings,
    })
}

#[cfg(test)]
mod tests;
