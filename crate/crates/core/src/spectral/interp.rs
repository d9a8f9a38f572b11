use num_complex::Complex;
use rayon::prelude::*;

use crate::scalar::{from_usize, Real};

use super::{to_spectrum, Field, Grid, Spectrum};

const PAR_THRESHOLD: usize = 64;
// Phasor powers are rebuilt from cis() this often to bound drift in the recurrence.
const RESEED: usize = 32;

/// Evaluates the truncated Fourier series of `f` at arbitrary points.
///
/// Points are reduced modulo the period first. The Nyquist mode is split
/// evenly between `+-N/2`, so the interpolant is real and reproduces the
/// samples exactly at the nodes.
pub fn fourier_interpolate<T: Real>(f: &Field<T>, points: &[T]) -> Vec<T> {
    SpectralInterpolant::new(&to_spectrum(f)).eval_many(points)
}

/// Pre-transformed interpolant for repeated evaluation.
#[derive(Clone, Debug)]
pub struct SpectralInterpolant<T: Real> {
    grid: Grid<T>,
    // Coefficients of modes 0..=N/2, already scaled by sqrt(2 pi)/(N dx).
    half: Vec<Complex<T>>,
}

impl<T: Real> SpectralInterpolant<T> {
    pub fn new(s: &Spectrum<T>) -> Self {
        let grid = s.grid().clone();
        let n = grid.len();
        let scale = (T::PI() + T::PI()).sqrt() / (from_usize::<T>(n) * grid.dx());
        let half = (0..=n / 2)
            .map(|j| {
                if j == n / 2 {
                    s.coeffs()[j] * scale
                } else {
                    s.mode(j as isize) * scale
                }
            })
            .collect();
        Self { grid, half }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn eval(&self, x: T) -> T {
        let x = self.grid.wrap(x);
        let n = self.grid.len();
        let dxi = self.grid.dxi();
        let two = T::one() + T::one();
        let mut acc = self.half[0].re;
        let step = Complex::from_polar(T::one(), dxi * x);
        let mut z = step;
        for j in 1..n / 2 {
            if j % RESEED == 0 {
                z = Complex::from_polar(T::one(), from_usize::<T>(j) * dxi * x);
            }
            acc = acc + two * (self.half[j] * z).re;
            z = z * step;
        }
        let nyq = self.half[n / 2];
        let theta = from_usize::<T>(n / 2) * dxi * x;
        acc + nyq.re * theta.cos() + nyq.im * theta.sin()
    }

    pub fn eval_many(&self, points: &[T]) -> Vec<T> {
        if points.len() >= PAR_THRESHOLD {
            points.par_iter().map(|&x| self.eval(x)).collect()
        } else {
            points.iter().map(|&x| self.eval(x)).collect()
        }
    }
}
