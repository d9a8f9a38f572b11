//! Pseudospectral simulation of `m_t + u^k m_x = 0`, `m = u - u_xx`, on a
//! large periodic box, with the norms and checks used to study its solutions.
//!
//! Numerical kernels are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the common double precision instantiation.

pub mod characteristics;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod initial;
pub mod scalar;
pub mod spaces;
pub mod spectral;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid64 = spectral::Grid<f64>;
pub type Field64 = spectral::Field<f64>;
pub type Spectrum64 = spectral::Spectrum<f64>;
pub type State64 = dynamics::State<f64>;
pub type SolverConfig64 = dynamics::SolverConfig<f64>;

pub type Grid32 = spectral::Grid<f32>;
pub type Field32 = spectral::Field<f32>;
pub type Spectrum32 = spectral::Spectrum<f32>;
pub type State32 = dynamics::State<f32>;
