//! Lower bound on the analyticity radius along a solution.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use crate::spaces::{kato_masuda_sq, NormTruncation};
use crate::spectral::Field;

use super::diagnostics::DiagnosticsSeries;
use super::report::{TheoremReport, Verdict};

/// `(A, B)` with `A = 26 sqrt(2) / (7 mu) (1 + mu) ||u0||_{sigma0,2}` and `B = 112 mu`.
pub fn radius_coefficients(u0_km_norm: f64, mu: f64) -> (f64, f64) {
    let a = 26.0 * SQRT_2 / (7.0 * mu) * (1.0 + mu) * u0_km_norm;
    (a, 112.0 * mu)
}

fn validate(sigma0: f64, u0_km_norm: f64, mu: f64) -> Result<()> {
    if !(sigma0 < 0.0) {
        return Err(Error::InvalidParameter(format!("sigma0 must be negative, got {sigma0}")));
    }
    if !(mu >= 1.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu must be finite and >= 1, got {mu}")));
    }
    if !(u0_km_norm >= 0.0 && u0_km_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Kato-Masuda norm must be finite and >= 0, got {u0_km_norm}"
        )));
    }
    Ok(())
}

/// `sigma(t) = sigma0 - A (e^{B t} - 1)`, the log of the radius bound.
pub fn radius_exponent(t: f64, sigma0: f64, u0_km_norm: f64, mu: f64) -> Result<f64> {
    validate(sigma0, u0_km_norm, mu)?;
    let (a, b) = radius_coefficients(u0_km_norm, mu);
    Ok(sigma0 - a * (b * t).exp_m1())
}

/// `e^{sigma(t)}`; underflows to zero within a few multiples of `1/B`.
pub fn radius_lower_bound(t: f64, sigma0: f64, u0_km_norm: f64, mu: f64) -> Result<f64> {
    radius_exponent(t, sigma0, u0_km_norm, mu).map(f64::exp)
}

/// The weaker form `L3 e^{-L1 e^{L2 t}}` with `L1 = 52 sqrt(2)/7 ||u0||_{sigma0,2}`,
/// `L2 = 112 mu` and `L3 = e^{sigma0} e^{L1}`.
pub fn double_exponential_bound(t: f64, sigma0: f64, u0_km_norm: f64, mu: f64) -> Result<f64> {
    validate(sigma0, u0_km_norm, mu)?;
    let l1 = 52.0 * SQRT_2 / 7.0 * u0_km_norm;
    let l2 = 112.0 * mu;
    Ok((sigma0 + l1 - l1 * (l2 * t).exp()).exp())
}

/// `||u0||_{sigma0,2} = sqrt(kato_masuda_sq(u0, sigma0, 2, J))`.
pub fn initial_km_norm<T: Real>(u0: &Field<T>, sigma0: f64, trunc: NormTruncation) -> Result<f64> {
    Ok(to_f64(kato_masuda_sq(u0, lit(sigma0), lit(2.0), trunc)?.sqrt()))
}

/// `mu = 1 + max_t ||u||_{H^2}` over the series.
pub fn series_mu(series: &DiagnosticsSeries) -> f64 {
    1.0 + series.records.iter().map(|r| r.h2).fold(0.0, f64::max)
}

/// Fitted radius against the bound at every recorded time.
///
/// `measured` is the smallest ratio fitted / bound, which must be at least
/// one. The final ratio is also reported in log form since the bound
/// underflows quickly.
pub fn check_radius_bound(series: &DiagnosticsSeries, sigma0: f64, u0_km_norm: f64) -> TheoremReport {
    let mu = series_mu(series);
    let r = TheoremReport::new("radius_bound")
        .param("k", series.k)
        .param("sigma0", sigma0)
        .param("u0_km_norm", u0_km_norm)
        .param("mu", mu);
    if series.is_diverged() {
        let mut r = r.note("run diverged");
        r.verdict = Verdict::Diverged;
        r.measured = f64::NAN;
        return r;
    }
    if series.records.is_empty() {
        return r.inapplicable("empty series");
    }
    if series.records.iter().any(|rec| rec.radius_fit.is_nan()) {
        return r.inapplicable("radius undefined for zero data");
    }
    let (a, b) = radius_coefficients(u0_km_norm, mu);
    let r = r.param("A", a).param("B", b);
    let t0 = series.records[0].t;
    let mut min_ratio = f64::INFINITY;
    let mut low_quality = 0usize;
    for rec in &series.records {
        let bound = match radius_lower_bound(rec.t - t0, sigma0, u0_km_norm, mu) {
            Ok(b) => b,
            Err(e) => return r.inapplicable(e.to_string()),
        };
        let ratio = if bound > 0.0 { rec.radius_fit / bound } else { f64::INFINITY };
        min_ratio = min_ratio.min(ratio);
        if rec.radius_fit_quality < 0.99 {
            low_quality += 1;
        }
    }
    let last = series.records.last().expect("non-empty");
    let final_sigma = radius_exponent(last.t - t0, sigma0, u0_km_norm, mu).unwrap_or(f64::NAN);
    let verdict = if min_ratio >= 1.0 { Verdict::Pass } else { Verdict::Fail };
    r.param("final_sigma", final_sigma)
        .param("final_log10_ratio", (last.radius_fit.ln() - final_sigma) / std::f64::consts::LN_10)
        .param("low_quality_fits", low_quality)
        .note("mu is taken from the completed run, so this is a post-processing check")
        .with_verdict(min_ratio, 1.0, verdict)
}
