//! Guaranteed existence time of the analytic solution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spaces::{em_norm, NormTruncation};
use crate::spectral::Field;

use super::report::TheoremReport;

/// `1/(k+1) + 3k/2 + k(k-1)/2` and `2^{2(k+2)} + 8` as exact rationals.
fn factors(k: u32) -> (BigRational, BigRational) {
    let kk = BigInt::from(k);
    let r = |n: BigInt, d: BigInt| BigRational::new(n, d);
    let poly = r(BigInt::one(), &kk + 1)
        + r(BigInt::from(3) * &kk, BigInt::from(2))
        + r(&kk * (&kk - 1), BigInt::from(2));
    let pow = (BigInt::one() << (2 * (k as usize + 2))) + 8;
    (poly, BigRational::from_integer(pow))
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    Ok(())
}

/// `kappa_m = 1 / ([1/(k+1) + 3k/2 + k(k-1)/2] (2^{2(k+2)} + 8) c_m^k)` in exact arithmetic.
pub fn lifespan_constant_exact(k: u32, c_m: &BigRational) -> Result<BigRational> {
    check_k(k)?;
    if *c_m <= BigRational::from_integer(BigInt::from(0)) {
        return Err(Error::InvalidParameter("c_m must be positive".into()));
    }
    let (poly, pow) = factors(k);
    let denom = poly * pow * num_traits::pow(c_m.clone(), k as usize);
    Ok(denom.recip())
}

/// Floating point `kappa_m`.
pub fn lifespan_constant<T: Real>(k: u32, c_m: T) -> Result<T> {
    check_k(k)?;
    if !(c_m > T::zero() && c_m.is_finite()) {
        return Err(Error::InvalidParameter("c_m must be positive and finite".into()));
    }
    let (poly, pow) = factors(k);
    let exact = (poly * pow).recip();
    let base = lit::<T>(exact.to_f64().unwrap_or(f64::NAN));
    Ok(base / c_m.powi(k as i32))
}

fn check_strip(sigma0: f64, sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < sigma0 && sigma0 <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < sigma < sigma0 <= 1, got sigma = {sigma}, sigma0 = {sigma0}"
        )));
    }
    Ok(())
}

/// `kappa_m / norm^k * (sigma0 - sigma)` for a given `E_{sigma0,m}` norm of `u0`.
///
/// Zero data exists for all time and gives `+inf`.
pub fn lifespan_from_norm(k: u32, norm: f64, sigma0: f64, sigma: f64, c_m: f64) -> Result<f64> {
    check_strip(sigma0, sigma)?;
    if !(norm >= 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter(format!("norm must be finite and >= 0, got {norm}")));
    }
    let kappa = lifespan_constant(k, c_m)?;
    Ok(kappa / norm.powi(k as i32) * (sigma0 - sigma))
}

/// Lifespan for initial data `u0` measured in `E_{sigma0,m}` truncated at `trunc`.
pub fn lifespan_bound<T: Real>(
    u0: &Field<T>,
    k: u32,
    m: usize,
    sigma0: f64,
    sigma: f64,
    c_m: f64,
    trunc: NormTruncation,
) -> Result<f64> {
    check_strip(sigma0, sigma)?;
    if m < 3 {
        return Err(Error::InvalidParameter(format!("lifespan needs m >= 3, got {m}")));
    }
    let norm = em_norm(u0, lit::<T>(sigma0), m, trunc)?;
    lifespan_from_norm(k, norm.to_f64().unwrap_or(f64::NAN), sigma0, sigma, c_m)
}

/// Compares the floating point constant with the exact one for `c_m = 1`.
pub fn lifespan_report(k: u32) -> Result<TheoremReport> {
    let exact = lifespan_constant_exact(k, &BigRational::one())?;
    let float = lifespan_constant::<f64>(k, 1.0)?;
    let e = exact.to_f64().unwrap_or(f64::NAN);
    let rel = ((float - e) / e).abs();
    Ok(TheoremReport::new("lifespan_constant")
        .param("k", k)
        .param("c_m", 1.0)
        .param("kappa_exact", exact.to_string())
        .param("kappa", float)
        .judge(rel, 1e-15))
}
