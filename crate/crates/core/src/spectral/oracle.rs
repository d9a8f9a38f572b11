//! Direct quadrature of the Green's-function convolution `g * f`,
//! `g(x) = e^{-|x|}/2`. Independent of the FFT path; used to cross-check
//! [`helmholtz_inverse`](super::helmholtz_inverse).

use crate::scalar::{lit, Real};

use super::Field;

/// Edge samples must sit below this fraction of `max |f|`.
pub const EDGE_DECAY_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ConvolutionResult<T: Real> {
    pub field: Field<T>,
    /// `max(|f(x_0)|, |f(x_{N-1})|) / max |f|`, zero for the zero field.
    pub edge_ratio: T,
    /// False when the input does not decay at the box edges; the
    /// whole-line convolution is then not a faithful model of the periodic one.
    pub edge_decay_ok: bool,
}

/// Trapezoid rule for `int e^{-|x_i - y|}/2 f(y) dy` over the grid nodes.
///
/// The kernel has a derivative jump of `-f(x_i)` at `y = x_i`, which limits
/// the plain trapezoid rule to `O(dx^2)`. The leading Euler-Maclaurin term of
/// that jump, `-dx^2/12 f(x_i)`, is added back, leaving an `O(dx^4)` error.
pub fn convolution_oracle<T: Real>(f: &Field<T>) -> ConvolutionResult<T> {
    let grid = f.grid();
    let dx = grid.dx();
    let x = grid.nodes();
    let v = f.values();
    let half = lit::<T>(0.5);
    let kink = dx * dx / lit(12.0);
    let out: Vec<T> = (0..v.len())
        .map(|i| {
            let sum: T = x
                .iter()
                .zip(v)
                .map(|(&y, &fy)| (-(x[i] - y).abs()).exp() * fy)
                .sum();
            half * dx * sum - kink * v[i]
        })
        .collect();

    let max = f.max_abs();
    let edge = v[0].abs().max(v[v.len() - 1].abs());
    let edge_ratio = if max > T::zero() { edge / max } else { T::zero() };
    ConvolutionResult {
        field: Field::from_parts(grid.clone(), out),
        edge_ratio,
        edge_decay_ok: edge_ratio <= lit(EDGE_DECAY_THRESHOLD),
    }
}
