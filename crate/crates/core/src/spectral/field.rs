use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, Real};

use super::Grid;

/// Real samples `f(x_i)` on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T: Real> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Real> Field<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for values produced by already validated kernels.
    pub(crate) fn from_parts(grid: Grid<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        Self::from_parts(grid.clone(), vec![T::zero(); grid.len()])
    }

    pub fn constant(grid: &Grid<T>, c: T) -> Self {
        Self::from_parts(grid.clone(), vec![c; grid.len()])
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(grid.clone(), grid.nodes().into_iter().map(f).collect())
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_parts(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: T, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + alpha * b)
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Max-norm distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())))
    }

    /// Riemann sum `sum_i f(x_i) dx`.
    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.grid.dx()
    }
}

impl<'a, T: Real> Add for &'a Field<T> {
    type Output = Field<T>;

    fn add(self, rhs: Self) -> Field<T> {
        self.zip_with(rhs, |a, b| a + b).expect("fields on the same grid")
    }
}

impl<'a, T: Real> Sub for &'a Field<T> {
    type Output = Field<T>;

    fn sub(self, rhs: Self) -> Field<T> {
        self.zip_with(rhs, |a, b| a - b).expect("fields on the same grid")
    }
}

impl<'a, T: Real> Mul<T> for &'a Field<T> {
    type Output = Field<T>;

    fn mul(self, rhs: T) -> Field<T> {
        self.map(|v| v * rhs)
    }
}

/// Fourier coefficients of a [`Field`], stored in FFT order.
///
/// `coeffs[i]` approximates `f^(xi_j) = (1/sqrt(2 pi)) int e^{-i x xi_j} f(x) dx`
/// with `j = grid.mode(i)`, discretized by the trapezoid rule on the grid nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T: Real> {
    grid: Grid<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(grid: Grid<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_parts(grid: Grid<T>, coeffs: Vec<Complex<T>>) -> Self {
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient of signed mode `j`.
    pub fn mode(&self, j: isize) -> Complex<T> {
        self.coeffs[self.grid.index_of_mode(j)]
    }

    /// Multiplies every coefficient by `multiplier(index, xi)`.
    pub fn apply(&self, multiplier: impl Fn(usize, T) -> Complex<T>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * multiplier(i, self.grid.wavenumber(i)))
            .collect();
        Self::from_parts(self.grid.clone(), coeffs)
    }

    /// Real multiplier variant of [`Spectrum::apply`].
    pub fn apply_real(&self, multiplier: impl Fn(T) -> T) -> Self {
        self.apply(|_, xi| Complex::new(multiplier(xi), T::zero()))
    }

    pub fn linear_combination(terms: &[(T, &Spectrum<T>)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?
            .1;
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); first.coeffs.len()];
        for (w, s) in terms {
            if s.grid != first.grid {
                return Err(Error::GridMismatch);
            }
            for (acc, c) in coeffs.iter_mut().zip(&s.coeffs) {
                *acc = *acc + *c * *w;
            }
        }
        Ok(Self::from_parts(first.grid.clone(), coeffs))
    }

    /// Discrete `sum_j weight(xi_j) |c_j|^2 dxi`.
    pub fn weighted_energy(&self, weight: impl Fn(T) -> T) -> T {
        let dxi = self.grid.dxi();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| weight(self.grid.wavenumber(i)) * c.norm_sqr())
            .sum::<T>()
            * dxi
    }
}

fn alternating_sign<T: Real>(grid: &Grid<T>, i: usize) -> T {
    if grid.mode(i).rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Forward transform under the `1/sqrt(2 pi)` convention.
pub fn to_spectrum<T: Real>(f: &Field<T>) -> Spectrum<T> {
    let grid = f.grid();
    let mut buf: Vec<Complex<T>> = f
        .values()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    grid.forward_plan().process(&mut buf);
    // Node offset x_0 = -L contributes the phase e^{i L xi_j} = (-1)^j.
    let scale = grid.dx() / (T::PI() + T::PI()).sqrt();
    for (i, c) in buf.iter_mut().enumerate() {
        *c = *c * (scale * alternating_sign(grid, i));
    }
    Spectrum::from_parts(grid.clone(), buf)
}

/// Inverse of [`to_spectrum`]; the imaginary part of the result is dropped.
pub fn to_field<T: Real>(s: &Spectrum<T>) -> Field<T> {
    let grid = s.grid();
    let mut buf: Vec<Complex<T>> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| c * alternating_sign(grid, i))
        .collect();
    grid.inverse_plan().process(&mut buf);
    let scale = (T::PI() + T::PI()).sqrt() / (from_usize::<T>(grid.len()) * grid.dx());
    Field::from_parts(grid.clone(), buf.into_iter().map(|c| c.re * scale).collect())
}

impl<T: Real> Field<T> {
    pub fn spectrum(&self) -> Spectrum<T> {
        to_spectrum(self)
    }
}

impl<T: Real> Spectrum<T> {
    pub fn field(&self) -> Field<T> {
        to_field(self)
    }
}
