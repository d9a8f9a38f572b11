//! Norms on the truncated line: Sobolev `H^s`, Gevrey `G^{sigma,s}`, the
//! Kato-Masuda analytic norm, the `E_{sigma,m}` sup-norm, `C^1` and `L^1`,
//! plus the strip-width estimator in [`radius`].
//!
//! Every whole-line integral is approximated by the Riemann sum with
//! spacing `dxi = pi/L` over the grid's wavenumbers.

mod radius;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::spectral::{derivative, to_spectrum, Field, Spectrum};

pub use radius::{
    analyticity_radius, Radius, RadiusEstimate, BAND_LOWER, BAND_UPPER, MIN_FIT_POINTS,
    NOISE_FLOOR_FACTOR, STEEPENING_THRESHOLD,
};

/// Wavenumbers with `|xi| >= TAIL_BAND * xi_max` form the tail band of the Gevrey sum.
pub const TAIL_BAND: f64 = 0.9;
/// Tail share above which a Gevrey norm is reported as tail dominated.
pub const TAIL_FRACTION_LIMIT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyParams<T> {
    pub sigma: T,
    pub s: T,
}

/// Cutoff `J` for the infinite sums and sups over derivative orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormTruncation {
    pub max_j: usize,
}

impl Default for NormTruncation {
    fn default() -> Self {
        Self { max_j: 10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GevreyNorm<T> {
    pub value: T,
    /// Share of the squared norm carried by the tail band.
    pub tail_fraction: T,
    /// The tail band carries more than [`TAIL_FRACTION_LIMIT`] of the norm:
    /// the true norm is infinite or the data is under-resolved.
    pub tail_dominated: bool,
}

impl<T: Real> Spectrum<T> {
    /// `sum_j (1 + xi_j^2)^s |c_j|^2 dxi`.
    pub fn sobolev_norm_sq(&self, s: T) -> T {
        self.weighted_energy(|xi| (T::one() + xi * xi).powf(s))
    }

    /// `||d^j f||_{H^s}^2` for `j = 0..=max_j`, computed in one pass.
    /// Odd orders exclude the Nyquist mode, matching [`Spectrum::derivative`].
    pub fn derivative_energies(&self, s: T, max_j: usize) -> Result<Vec<T>> {
        let cap = self.grid().max_derivative();
        if max_j > cap {
            return Err(Error::DerivativeOrder { order: max_j, max: cap });
        }
        let grid = self.grid();
        let nyquist = grid.len() / 2;
        let mut out = vec![T::zero(); max_j + 1];
        for (i, c) in self.coeffs().iter().enumerate() {
            let xi = grid.wavenumber(i);
            let xi2 = xi * xi;
            let mut term = (T::one() + xi2).powf(s) * c.norm_sqr();
            for (j, slot) in out.iter_mut().enumerate() {
                if !(j % 2 == 1 && i == nyquist) {
                    *slot = *slot + term;
                }
                term = term * xi2;
            }
        }
        let dxi = grid.dxi();
        Ok(out.into_iter().map(|e| e * dxi).collect())
    }
}

/// Sobolev norm `||f||_{H^s}`. Negative `s` is accepted and gives the dual-scale norm.
pub fn sobolev_norm<T: Real>(f: &Field<T>, s: T) -> T {
    to_spectrum(f).sobolev_norm_sq(s).sqrt()
}

/// Gevrey norm `||(1+xi^2)^{s/2} e^{sigma |xi|} f^||_{L^2}`.
pub fn gevrey_norm<T: Real>(f: &Field<T>, p: GevreyParams<T>) -> Result<GevreyNorm<T>> {
    if !(p.sigma >= T::zero() && p.sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Gevrey sigma must be finite and >= 0, got {}",
            p.sigma
        )));
    }
    let spec = to_spectrum(f);
    let grid = spec.grid();
    let tail_start = lit::<T>(TAIL_BAND) * grid.max_wavenumber();
    let two = T::one() + T::one();
    let mut total = T::zero();
    let mut tail = T::zero();
    for (i, c) in spec.coeffs().iter().enumerate() {
        let xi = grid.wavenumber(i);
        let w = (T::one() + xi * xi).powf(p.s) * (two * p.sigma * xi.abs()).exp();
        let e = w * c.norm_sqr();
        total = total + e;
        if xi.abs() >= tail_start {
            tail = tail + e;
        }
    }
    let value = (total * grid.dxi()).sqrt();
    let tail_fraction = if total > T::zero() {
        tail / total
    } else {
        T::zero()
    };
    let tail_dominated =
        !value.is_finite() || !(tail_fraction <= lit(TAIL_FRACTION_LIMIT));
    Ok(GevreyNorm {
        value,
        tail_fraction,
        tail_dominated,
    })
}

/// Individual terms `e^{2 sigma j}/(j!)^2 ||d^j f||_{H^s}^2`, `j = 0..=J`.
pub fn kato_masuda_terms<T: Real>(
    f: &Field<T>,
    sigma: T,
    s: T,
    trunc: NormTruncation,
) -> Result<Vec<T>> {
    let energies = to_spectrum(f).derivative_energies(s, trunc.max_j)?;
    let growth = (sigma + sigma).exp();
    let mut weight = T::one();
    let mut out = Vec::with_capacity(energies.len());
    for (j, e) in energies.into_iter().enumerate() {
        if j > 0 {
            let jj = from_usize::<T>(j);
            weight = weight * growth / (jj * jj);
        }
        out.push(weight * e);
    }
    Ok(out)
}

/// Truncated squared Kato-Masuda norm
/// `sum_{j<=J} e^{2 sigma j}/(j!)^2 ||d^j f||_{H^s}^2`.
///
/// Half of this value is the energy functional `Phi_{sigma,s}`.
pub fn kato_masuda_sq<T: Real>(f: &Field<T>, sigma: T, s: T, trunc: NormTruncation) -> Result<T> {
    Ok(kato_masuda_terms(f, sigma, s, trunc)?.into_iter().sum())
}

/// Ratio of the last retained Kato-Masuda term to the running sum; a small
/// value indicates the truncation has converged.
pub fn kato_masuda_last_term_ratio<T: Real>(
    f: &Field<T>,
    sigma: T,
    s: T,
    trunc: NormTruncation,
) -> Result<T> {
    let terms = kato_masuda_terms(f, sigma, s, trunc)?;
    let total: T = terms.iter().copied().sum();
    let last = *terms.last().expect("at least one term");
    Ok(if total > T::zero() { last / total } else { T::zero() })
}

/// `sup_{j<=J} sigma^j (j+1)^2 / j! ||d^j f||_{H^{2m}}`.
pub fn em_norm<T: Real>(f: &Field<T>, sigma: T, m: usize, trunc: NormTruncation) -> Result<T> {
    if !(sigma > T::zero() && sigma <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "E_(sigma,m) needs 0 < sigma <= 1, got {sigma}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("E_(sigma,m) needs m >= 1".into()));
    }
    let energies = to_spectrum(f).derivative_energies(from_usize(2 * m), trunc.max_j)?;
    let mut sigma_pow = T::one();
    let mut factorial = T::one();
    let mut best = T::zero();
    for (j, e) in energies.into_iter().enumerate() {
        if j > 0 {
            sigma_pow = sigma_pow * sigma;
            factorial = factorial * from_usize(j);
        }
        let jp1 = from_usize::<T>(j + 1);
        best = best.max(sigma_pow * jp1 * jp1 / factorial * e.sqrt());
    }
    Ok(best)
}

/// `max |f| + max |f_x|` over the grid nodes.
pub fn c1_norm<T: Real>(f: &Field<T>) -> T {
    let fx = derivative(f, 1).expect("first derivative is within any cap");
    f.max_abs() + fx.max_abs()
}

/// `sum_i |f(x_i)| dx`.
pub fn l1_norm<T: Real>(f: &Field<T>) -> T {
    f.values().iter().map(|v| v.abs()).sum::<T>() * f.grid().dx()
}
