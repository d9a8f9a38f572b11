use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::spectral::{to_field, Field, Grid, Spectrum};
use num_complex::Complex;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random real field with modes `|j| <= max_mode` and Hermitian symmetry.
pub fn band_limited(grid: &Grid<f64>, max_mode: usize, rng: &mut StdRng) -> Field<f64> {
    let n = grid.len();
    let mut coeffs = vec![Complex::new(0.0, 0.0); n];
    coeffs[0] = Complex::new(rng.gen_range(-1.0..1.0), 0.0);
    for j in 1..=max_mode.min(n / 2 - 1) {
        let decay = (-(j as f64) / (max_mode as f64 / 3.0 + 1.0)).exp();
        let c = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay;
        coeffs[j] = c;
        coeffs[n - j] = c.conj();
    }
    to_field(&Spectrum::new(grid.clone(), coeffs).unwrap())
}

pub fn gaussian(grid: &Grid<f64>, width: f64) -> Field<f64> {
    Field::from_fn(grid, |x| (-(x / width).powi(2)).exp()).unwrap()
}

/// Box-periodic Poisson kernel, whose sampled transform is exactly
/// `e^{-a |xi_j|} / sqrt(2 pi)` up to aliasing.
pub fn poisson(grid: &Grid<f64>, a: f64) -> Field<f64> {
    let l = grid.half_length();
    let q = std::f64::consts::PI / l;
    Field::from_fn(grid, |x| (q * a).sinh() / (2.0 * l * ((q * a).cosh() - (q * x).cos()))).unwrap()
}
