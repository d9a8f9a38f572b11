//! Uniform periodic grids, the discrete Fourier transform under the
//! `1/sqrt(2 pi)` convention, spectral derivatives, Helmholtz inversion,
//! dealiasing and off-grid interpolation.
//!
//! The whole line is modelled by the box `[-L, L)`; whole-line statements
//! are only meaningful for data that decays at the edges.

mod field;
mod grid;
mod interp;
mod ops;
mod oracle;

pub use field::{to_field, to_spectrum, Field, Spectrum};
pub use grid::{Grid, DEFAULT_MAX_DERIVATIVE};
pub use interp::{fourier_interpolate, SpectralInterpolant};
pub use ops::{dealias, derivative, helmholtz, helmholtz_inverse};
pub use oracle::{convolution_oracle, ConvolutionResult, EDGE_DECAY_THRESHOLD};
