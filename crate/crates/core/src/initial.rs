//! Named families of initial data.

use serde::{Deserialize, Serialize};

use crate::dynamics::velocity_from_momentum;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{Field, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `u0 = A e^{-((x-c)/w)^2}`.
    GaussianU,
    /// `m0 = A e^{-((x-c)/w)^2}`, `u0 = g * m0`; `m0` is one-signed by construction.
    GaussianMomentum,
    /// Poisson kernel `A w / (pi ((x-c)^2 + w^2))`, periodized over the box.
    /// Holomorphic in the strip `|Im z| < w`.
    PoissonKernel,
    /// `A e^{1 - 1/(1 - r^2)}` for `r = (x-c)/w`, `|r| < 1`, and exactly zero outside.
    SmoothBump,
    /// `A cos(pi n (x - c) / L)`.
    SingleMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilyParams {
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
    /// `+1` or `-1`, multiplies the amplitude.
    pub sign: i8,
    pub mode: u32,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            width: 1.0,
            center: 0.0,
            sign: 1,
            mode: 1,
        }
    }
}

impl FamilyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "width must be positive, got {}",
                self.width
            )));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {}", self.sign)));
        }
        if !(self.amplitude.is_finite() && self.center.is_finite()) {
            return Err(Error::InvalidParameter("amplitude and center must be finite".into()));
        }
        Ok(())
    }
}

/// Samples the initial velocity `u0` of `family` on `grid`.
pub fn sample<T: Real>(grid: &Grid<T>, family: Family, p: &FamilyParams) -> Result<Field<T>> {
    p.validate()?;
    let amp = lit::<T>(p.amplitude * f64::from(p.sign));
    let w = lit::<T>(p.width);
    let c = lit::<T>(p.center);
    let l = grid.half_length();
    let gaussian = |x: T| amp * (-((x - c) / w).powi(2)).exp();
    match family {
        Family::GaussianU => Field::from_fn(grid, gaussian),
        Family::GaussianMomentum => Ok(velocity_from_momentum(&Field::from_fn(grid, gaussian)?)),
        Family::PoissonKernel => {
            // sum_n w/(pi((x + 2nL)^2 + w^2)) in closed form.
            let q = T::PI() / l;
            let two = T::one() + T::one();
            Field::from_fn(grid, |x| {
                amp * (q * w).sinh() / (two * l * ((q * w).cosh() - (q * (x - c)).cos()))
            })
        }
        Family::SmoothBump => Field::from_fn(grid, |x| {
            let r = (x - c) / w;
            if r.abs() < T::one() {
                amp * (T::one() - T::one() / (T::one() - r * r)).exp()
            } else {
                T::zero()
            }
        }),
        Family::SingleMode => {
            let n = lit::<T>(f64::from(p.mode));
            Field::from_fn(grid, |x| amp * (T::PI() * n * (x - c) / l).cos())
        }
    }
}
