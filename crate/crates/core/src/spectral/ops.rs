use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

use super::{to_field, to_spectrum, Field, Spectrum};

/// `(i xi)^order` as a complex number.
fn ik_power<T: Real>(xi: T, order: usize) -> Complex<T> {
    let mag = xi.powi(order as i32);
    match order % 4 {
        0 => Complex::new(mag, T::zero()),
        1 => Complex::new(T::zero(), mag),
        2 => Complex::new(-mag, T::zero()),
        _ => Complex::new(T::zero(), -mag),
    }
}

impl<T: Real> Spectrum<T> {
    /// Multiplies by `(i xi)^order`. Odd orders drop the Nyquist mode, whose
    /// derivative is not representable by a real field.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        let max = self.grid().max_derivative();
        if order > max {
            return Err(Error::DerivativeOrder { order, max });
        }
        let nyquist = self.grid().len() / 2;
        Ok(self.apply(|i, xi| {
            if order % 2 == 1 && i == nyquist {
                Complex::new(T::zero(), T::zero())
            } else {
                ik_power(xi, order)
            }
        }))
    }

    /// Fourier multiplier `1 / (1 + xi^2)`.
    pub fn helmholtz_inverse(&self) -> Self {
        self.apply_real(|xi| T::one() / (T::one() + xi * xi))
    }

    /// Multiplier `1 + xi^2`, i.e. `1 - d^2/dx^2`.
    pub fn helmholtz(&self) -> Self {
        self.apply_real(|xi| T::one() + xi * xi)
    }

    /// Zeroes every mode with `|j| > fraction * N/2`.
    pub fn dealias(&self, fraction: T) -> Self {
        let cutoff = fraction * from_usize::<T>(self.grid().len() / 2);
        let grid = self.grid().clone();
        self.apply(|i, _| {
            let j = lit::<T>(grid.mode(i).unsigned_abs() as f64);
            if j > cutoff {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::one(), T::zero())
            }
        })
    }

    /// High-order exponential filter `exp(-alpha (|j|/(N/2))^order)`.
    pub fn exponential_filter(&self, alpha: T, order: i32) -> Self {
        let grid = self.grid().clone();
        let half = from_usize::<T>(grid.len() / 2);
        self.apply(|i, _| {
            let r = lit::<T>(grid.mode(i).unsigned_abs() as f64) / half;
            Complex::new((-alpha * r.powi(order)).exp(), T::zero())
        })
    }
}

/// Spectral derivative of order `order`; `derivative(f, 0)` returns `f`.
pub fn derivative<T: Real>(f: &Field<T>, order: usize) -> Result<Field<T>> {
    if order == 0 {
        return Ok(f.clone());
    }
    Ok(to_field(&to_spectrum(f).derivative(order)?))
}

/// `(1 - d^2/dx^2)^{-1} f`, realized as the multiplier `1/(1 + xi^2)`.
pub fn helmholtz_inverse<T: Real>(f: &Field<T>) -> Field<T> {
    to_field(&to_spectrum(f).helmholtz_inverse())
}

/// `(1 - d^2/dx^2) f`.
pub fn helmholtz<T: Real>(f: &Field<T>) -> Field<T> {
    to_field(&to_spectrum(f).helmholtz())
}

/// Truncates `s` to `|j| <= fraction * N/2`. Idempotent; `fraction = 1` is the identity.
pub fn dealias<T: Real>(s: &Spectrum<T>, fraction: T) -> Result<Spectrum<T>> {
    if !(fraction > T::zero() && fraction <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "dealias fraction must lie in (0, 1], got {fraction}"
        )));
    }
    Ok(s.dealias(fraction))
}
