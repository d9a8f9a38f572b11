//! Strip-width estimate from the exponential decay rate of `|f^(xi)|`.
//!
//! A function holomorphic in `{|Im z| < a}` has `|f^(xi)| ~ e^{-a |xi|}`, so
//! minus the slope of `log |f^|` against `|xi|` estimates `a`. Entire
//! functions decay faster than any exponential: their log-spectrum bends
//! downward, which the fit detects by comparing the slopes of the lower and
//! upper halves of the fitting band.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{to_spectrum, Field};

/// Band used for the fit, relative to `max |f^|`.
pub const BAND_UPPER: f64 = 1e-2;
pub const BAND_LOWER: f64 = 1e-13;
/// The lower band edge is raised to this multiple of the spectral noise
/// floor, estimated as the median magnitude over `|xi| >= 0.75 xi_max`.
pub const NOISE_FLOOR_FACTOR: f64 = 100.0;
pub const MIN_FIT_POINTS: usize = 8;
/// Relative steepening of the upper-half slope over the lower-half slope
/// above which the decay is classified as faster than exponential.
pub const STEEPENING_THRESHOLD: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Radius<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Radius<T> {
    pub fn value(&self) -> T {
        match self {
            Radius::Finite(r) => *r,
            Radius::Infinite => T::infinity(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Radius::Infinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusEstimate<T> {
    pub radius: Radius<T>,
    /// Coefficient of determination of the linear fit.
    pub fit_quality: T,
    /// Fewer than [`MIN_FIT_POINTS`] wavenumbers fell in the band.
    pub low_quality: bool,
    pub points: usize,
    /// Fitted decay rate (minus the slope), even when the radius is reported infinite.
    pub decay_rate: T,
    pub steepening: T,
}

struct LineFit {
    slope: f64,
    r2: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - my - slope * (a - mx)).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Some(LineFit { slope, r2 })
}

/// Least-squares estimate of the analyticity strip half-width of `f`.
pub fn analyticity_radius<T: Real>(f: &Field<T>) -> Result<RadiusEstimate<T>> {
    let spec = to_spectrum(f);
    let grid = spec.grid();
    let n = grid.len();
    let mags: Vec<f64> = spec.coeffs().iter().map(|c| to_f64(c.norm())).collect();
    let max = mags.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::ZeroField);
    }

    let xi_max = to_f64(grid.max_wavenumber());
    let mut top: Vec<f64> = (0..n)
        .filter(|&i| to_f64(grid.wavenumber(i)).abs() >= 0.75 * xi_max)
        .map(|i| mags[i])
        .collect();
    top.sort_by(f64::total_cmp);
    let floor = top[top.len() / 2];
    let lower = (BAND_LOWER * max).max(NOISE_FLOOR_FACTOR * floor);
    let upper = BAND_UPPER * max;

    let (xs, ys): (Vec<f64>, Vec<f64>) = (1..n / 2)
        .filter(|&i| mags[i] >= lower && mags[i] <= upper)
        .map(|i| (to_f64(grid.wavenumber(i)), mags[i].ln()))
        .unzip();
    let points = xs.len();
    let low_quality = points < MIN_FIT_POINTS;

    let Some(fit) = fit_line(&xs, &ys) else {
        // Nothing usable in the band: the spectrum falls from above the band
        // to below the floor within one mode, i.e. faster than any exponential.
        return Ok(RadiusEstimate {
            radius: Radius::Infinite,
            fit_quality: T::zero(),
            low_quality: true,
            points,
            decay_rate: T::infinity(),
            steepening: T::infinity(),
        });
    };

    let decay = -fit.slope;
    let half = points / 2;
    let steepening = match (
        fit_line(&xs[..half], &ys[..half]),
        fit_line(&xs[half..], &ys[half..]),
    ) {
        (Some(lo), Some(hi)) if lo.slope < 0.0 => (lo.slope - hi.slope) / -lo.slope,
        _ => 0.0,
    };
    let radius = if decay <= 0.0 {
        Radius::Finite(T::zero())
    } else if steepening > STEEPENING_THRESHOLD {
        Radius::Infinite
    } else {
        Radius::Finite(lit(decay))
    };
    Ok(RadiusEstimate {
        radius,
        fit_quality: lit(fit.r2),
        low_quality,
        points,
        decay_rate: lit(decay),
        steepening: lit(steepening),
    })
}
