//! Particle paths `dy/dt = u(t, y)^k`, `y(0, x) = x`, integrated through a
//! stored velocity history, and the transport residual `m(t, y(t,x)) - m0(x)`.

use crate::dynamics::{momentum, ModelParams, State};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{to_spectrum, Field, Grid, SpectralInterpolant, Spectrum};

/// Seeds within this many indices of the active momentum region are kept
/// when measuring the transport residual.
pub const RESIDUAL_MARGIN_SEEDS: usize = 4;
/// Seeds with `|m0| <= RESIDUAL_SUPPORT_FLOOR * max |m0|` (and outside the margin) are skipped.
pub const RESIDUAL_SUPPORT_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowMap<T> {
    pub t: T,
    pub seeds: Vec<T>,
    /// `y(t, seeds[i])`, not reduced modulo the period.
    pub positions: Vec<T>,
}

impl<T: Real> FlowMap<T> {
    pub fn identity(t: T, seeds: &[T]) -> Self {
        Self {
            t,
            seeds: seeds.to_vec(),
            positions: seeds.to_vec(),
        }
    }

    /// Strictly increasing positions for strictly increasing seeds.
    pub fn is_monotone(&self) -> bool {
        self.positions.windows(2).all(|w| w[1] > w[0])
    }

    pub fn max_displacement(&self) -> T {
        self.seeds
            .iter()
            .zip(&self.positions)
            .fold(T::zero(), |acc, (&x, &y)| acc.max((y - x).abs()))
    }
}

#[derive(Clone, Debug)]
pub struct FlowEvolution<T> {
    /// One map per input snapshot, starting with the identity.
    pub maps: Vec<FlowMap<T>>,
    /// Indices into `maps` whose positions are not strictly increasing.
    pub monotonicity_violations: Vec<usize>,
}

impl<T: Real> FlowEvolution<T> {
    pub fn is_monotone(&self) -> bool {
        self.monotonicity_violations.is_empty()
    }

    pub fn last(&self) -> &FlowMap<T> {
        self.maps.last().expect("at least the initial map")
    }
}

/// The grid nodes, the default seed set.
pub fn default_seeds<T: Real>(grid: &Grid<T>) -> Vec<T> {
    grid.nodes()
}

/// Velocity history with cubic Lagrange interpolation in time over the four
/// snapshots surrounding the query time (fewer near short histories).
struct History<'a, T: Real> {
    times: Vec<T>,
    spectra: &'a [Spectrum<T>],
}

impl<T: Real> History<'_, T> {
    fn at(&self, interval: usize, t: T) -> Result<SpectralInterpolant<T>> {
        let n = self.times.len();
        let width = n.min(4);
        let start = interval.saturating_sub(1).min(n - width);
        let idx: Vec<usize> = (start..start + width).collect();
        let terms: Vec<(T, &Spectrum<T>)> = idx
            .iter()
            .map(|&i| {
                let w = idx
                    .iter()
                    .filter(|&&j| j != i)
                    .fold(T::one(), |acc, &j| {
                        acc * (t - self.times[j]) / (self.times[i] - self.times[j])
                    });
                (w, &self.spectra[i])
            })
            .collect();
        Ok(SpectralInterpolant::new(&Spectrum::linear_combination(&terms)?))
    }
}

fn velocity<T: Real>(interp: &SpectralInterpolant<T>, points: &[T], k: u32) -> Vec<T> {
    interp
        .eval_many(points)
        .into_iter()
        .map(|u| u.powi(k as i32))
        .collect()
}

/// Integrates the particle paths through `snapshots` with one classical RK4
/// step per snapshot interval.
pub fn evolve_flow<T: Real>(
    snapshots: &[State<T>],
    p: ModelParams,
    seeds: &[T],
) -> Result<FlowEvolution<T>> {
    let k = p.k;
    let first = snapshots
        .first()
        .ok_or_else(|| Error::InvalidParameter("no snapshots".into()))?;
    if snapshots.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::InvalidParameter("snapshot times must increase strictly".into()));
    }
    if snapshots.iter().any(|s| s.u.grid() != first.u.grid()) {
        return Err(Error::GridMismatch);
    }
    let spectra: Vec<Spectrum<T>> = snapshots.iter().map(|s| to_spectrum(&s.u)).collect();
    let history = History {
        times: snapshots.iter().map(|s| s.t).collect(),
        spectra: &spectra,
    };

    let mut maps = vec![FlowMap::identity(first.t, seeds)];
    let mut violations = Vec::new();
    if !maps[0].is_monotone() {
        violations.push(0);
    }
    let mut y = seeds.to_vec();
    let two = lit::<T>(2.0);
    let sixth = lit::<T>(1.0 / 6.0);
    for n in 0..snapshots.len() - 1 {
        let (t0, t1) = (history.times[n], history.times[n + 1]);
        let h = t1 - t0;
        let start = SpectralInterpolant::new(&spectra[n]);
        let mid = history.at(n, t0 + h / two)?;
        let end = SpectralInterpolant::new(&spectra[n + 1]);

        let k1 = velocity(&start, &y, k);
        let y2: Vec<T> = y.iter().zip(&k1).map(|(&a, &b)| a + h / two * b).collect();
        let k2 = velocity(&mid, &y2, k);
        let y3: Vec<T> = y.iter().zip(&k2).map(|(&a, &b)| a + h / two * b).collect();
        let k3 = velocity(&mid, &y3, k);
        let y4: Vec<T> = y.iter().zip(&k3).map(|(&a, &b)| a + h * b).collect();
        let k4 = velocity(&end, &y4, k);
        for i in 0..y.len() {
            y[i] = y[i] + h * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("flow positions"));
        }
        let map = FlowMap {
            t: t1,
            seeds: seeds.to_vec(),
            positions: y.clone(),
        };
        if !map.is_monotone() {
            violations.push(maps.len());
        }
        maps.push(map);
    }
    Ok(FlowEvolution {
        maps,
        monotonicity_violations: violations,
    })
}

/// `max_i |m_t(y(t, x_i)) - m0(x_i)|` over seeds where `m0` is active, plus
/// a margin of [`RESIDUAL_MARGIN_SEEDS`] neighbours on each side.
pub fn transport_residual<T: Real>(flow: &FlowMap<T>, m0: &Field<T>, m_t: &Field<T>) -> Result<T> {
    if m0.grid() != m_t.grid() {
        return Err(Error::GridMismatch);
    }
    let start = SpectralInterpolant::new(&to_spectrum(m0));
    let now = SpectralInterpolant::new(&to_spectrum(m_t));
    let m0_at_seeds = start.eval_many(&flow.seeds);
    let m_on_paths = now.eval_many(&flow.positions);

    let floor = lit::<T>(RESIDUAL_SUPPORT_FLOOR) * m0.max_abs();
    let n = flow.seeds.len();
    let mut keep = vec![false; n];
    for (i, v) in m0_at_seeds.iter().enumerate() {
        if v.abs() > floor {
            let lo = i.saturating_sub(RESIDUAL_MARGIN_SEEDS);
            let hi = (i + RESIDUAL_MARGIN_SEEDS).min(n - 1);
            keep[lo..=hi].iter_mut().for_each(|k| *k = true);
        }
    }
    Ok((0..n)
        .filter(|&i| keep[i])
        .fold(T::zero(), |acc, i| acc.max((m_on_paths[i] - m0_at_seeds[i]).abs())))
}

/// Transport residual at the end of `flow`, with `m` recovered from the last snapshot.
pub fn final_transport_residual<T: Real>(
    flow: &FlowEvolution<T>,
    snapshots: &[State<T>],
) -> Result<T> {
    let first = snapshots
        .first()
        .ok_or_else(|| Error::InvalidParameter("no snapshots".into()))?;
    let last = snapshots.last().expect("non-empty");
    transport_residual(flow.last(), &momentum(&first.u), &momentum(&last.u))
}
