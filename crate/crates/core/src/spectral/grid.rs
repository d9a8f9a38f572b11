use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Default cap on spectral derivative order.
pub const DEFAULT_MAX_DERIVATIVE: usize = 12;

/// Uniform periodic grid on `[-L, L)` with `N` nodes.
///
/// Carries pre-planned forward and inverse FFTs, so clones are cheap and
/// every field sampled on the grid shares the same plans.
#[derive(Clone)]
pub struct Grid<T: Real> {
    half_length: T,
    n: usize,
    max_derivative: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> Grid<T> {
    pub fn new(half_length: T, n: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > T::zero()) {
            return Err(Error::InvalidGrid(format!(
                "half_length must be positive and finite, got {half_length}"
            )));
        }
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n_points must be even and >= 16, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            half_length,
            n,
            max_derivative: DEFAULT_MAX_DERIVATIVE,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    /// Same grid with a different derivative-order cap.
    pub fn with_max_derivative(mut self, max: usize) -> Self {
        self.max_derivative = max;
        self
    }

    pub fn half_length(&self) -> T {
        self.half_length
    }

    pub fn period(&self) -> T {
        self.half_length + self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn max_derivative(&self) -> usize {
        self.max_derivative
    }

    pub fn dx(&self) -> T {
        self.period() / from_usize(self.n)
    }

    /// Wavenumber spacing `pi / L`.
    pub fn dxi(&self) -> T {
        T::PI() / self.half_length
    }

    pub fn node(&self, i: usize) -> T {
        -self.half_length + from_usize::<T>(i) * self.dx()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Signed mode number of FFT-ordered index `i`, in `-N/2 ..= N/2 - 1`.
    pub fn mode(&self, i: usize) -> isize {
        let half = self.n / 2;
        if i < half {
            i as isize
        } else {
            i as isize - self.n as isize
        }
    }

    /// FFT-ordered index of signed mode `j`.
    pub fn index_of_mode(&self, j: isize) -> usize {
        j.rem_euclid(self.n as isize) as usize
    }

    /// Wavenumber `xi_j = pi j / L` for FFT-ordered index `i`.
    pub fn wavenumber(&self, i: usize) -> T {
        lit::<T>(self.mode(i) as f64) * self.dxi()
    }

    pub fn wavenumbers(&self) -> Vec<T> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// Largest resolved wavenumber magnitude, `pi N / (2L)`.
    pub fn max_wavenumber(&self) -> T {
        from_usize::<T>(self.n / 2) * self.dxi()
    }

    /// Reduces `x` modulo the period into `[-L, L)`.
    pub fn wrap(&self, x: T) -> T {
        let p = self.period();
        let shifted = (x + self.half_length) % p;
        let shifted = if shifted < T::zero() { shifted + p } else { shifted };
        let y = shifted - self.half_length;
        if y >= self.half_length {
            -self.half_length
        } else {
            y
        }
    }

    pub(crate) fn forward_plan(&self) -> &Arc<dyn Fft<T>> {
        &self.forward
    }

    pub(crate) fn inverse_plan(&self) -> &Arc<dyn Fft<T>> {
        &self.inverse
    }
}

impl<T: Real> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("half_length", &self.half_length)
            .field("n", &self.n)
            .field("max_derivative", &self.max_derivative)
            .finish()
    }
}
