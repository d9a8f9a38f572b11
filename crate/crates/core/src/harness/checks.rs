//! One function per checkable claim. Each takes a finished series and
//! returns a [`TheoremReport`].

use serde_json::json;

use super::diagnostics::{time_derivative, DiagnosticsSeries};
use super::report::{TheoremReport, Verdict};
use super::tolerances::*;

/// Sign of the initial momentum, if it has one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signedness {
    Zero,
    Positive,
    Negative,
    Mixed,
}

impl Signedness {
    fn label(self) -> &'static str {
        match self {
            Signedness::Zero => "zero",
            Signedness::Positive => "nonnegative",
            Signedness::Negative => "nonpositive",
            Signedness::Mixed => "sign-changing",
        }
    }
}

/// Classifies `m0` from its extrema with the floor `ONE_SIGNED_FLOOR * max |m0|`.
pub fn momentum_sign(min_m: f64, max_m: f64) -> Signedness {
    let scale = min_m.abs().max(max_m.abs());
    if scale == 0.0 {
        return Signedness::Zero;
    }
    let floor = ONE_SIGNED_FLOOR * scale;
    if min_m >= -floor {
        Signedness::Positive
    } else if max_m <= floor {
        Signedness::Negative
    } else {
        Signedness::Mixed
    }
}

fn base(claim: &str, series: &DiagnosticsSeries) -> TheoremReport {
    TheoremReport::new(claim)
        .param("k", series.k)
        .param("half_length", series.half_length)
        .param("n_points", series.n_points)
        .param("t_end", series.records.last().map_or(0.0, |r| r.t))
        .param("snapshots", series.records.len())
}

/// Common gate: divergence, empty series, whole-line validity.
fn gate(report: TheoremReport, series: &DiagnosticsSeries) -> Result<TheoremReport, TheoremReport> {
    if series.is_diverged() {
        let mut r = report.note(format!("run diverged: {:?}", series.status));
        r.verdict = Verdict::Diverged;
        r.measured = f64::NAN;
        return Err(r);
    }
    let Some(first) = series.initial() else {
        return Err(report.inapplicable("empty series"));
    };
    if first.edge_ratio > EDGE_DECAY {
        return Err(report.inapplicable(format!(
            "initial data does not decay at the box edges (edge ratio {:e} > {:e})",
            first.edge_ratio, EDGE_DECAY
        )));
    }
    Ok(report)
}

fn require_k1(report: TheoremReport, series: &DiagnosticsSeries) -> Result<TheoremReport, TheoremReport> {
    if series.k != 1 {
        Err(report.inapplicable(format!("claim stated for k = 1, run has k = {}", series.k)))
    } else {
        Ok(report)
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(r) => r,
            Err(r) => return r,
        }
    };
}

/// `int u dx` is constant in time for k = 1.
pub fn check_mean_conservation(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("mean_conservation", series);
    let r = tri!(gate(r, series));
    let r = tri!(require_k1(r, series));
    let m0 = series.records[0].mean_u;
    let scale = m0.abs().max(1.0);
    let drift = series
        .records
        .iter()
        .map(|rec| (rec.mean_u - m0).abs() / scale)
        .fold(0.0, f64::max);
    r.param("initial_mean", m0)
        .note("drift measured relative to max(1, |int u0|)")
        .judge(drift, MEAN_CONSERVATION)
}

/// `m` and `u` keep the sign of `m0`.
pub fn check_sign_invariance(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("sign_invariance", series);
    let r = tri!(gate(r, series));
    let first = &series.records[0];
    let sign = momentum_sign(first.min_m, first.max_m);
    let r = r.param("m0_sign", sign.label());
    let scale = first.min_m.abs().max(first.max_m.abs());
    let worst = match sign {
        Signedness::Zero => 0.0,
        Signedness::Mixed => return r.inapplicable("m0 changes sign"),
        Signedness::Positive => series
            .records
            .iter()
            .map(|rec| (-rec.min_m).max(-rec.min_u).max(0.0))
            .fold(0.0, f64::max),
        Signedness::Negative => series
            .records
            .iter()
            .map(|rec| rec.max_m.max(rec.max_u).max(0.0))
            .fold(0.0, f64::max),
    };
    let measured = if scale > 0.0 { worst / scale } else { 0.0 };
    let r = if sign == Signedness::Negative {
        if series.k % 2 == 1 {
            r.note("nonpositive data; for odd k this is the reflection u -> -u(-x) of the nonnegative case")
        } else {
            r.note("nonpositive data with even k has no reflection symmetry; simulated directly")
        }
    } else {
        r
    };
    r.note("violation relative to max |m0|").judge(measured, SIGN_VIOLATION)
}

/// Whether `u` keeps one sign along the whole run.
fn u_one_signed(series: &DiagnosticsSeries) -> bool {
    let scale = series
        .records
        .iter()
        .map(|r| r.min_u.abs().max(r.max_u.abs()))
        .fold(0.0, f64::max);
    let floor = SIGN_VIOLATION * scale;
    series.records.iter().all(|r| r.min_u >= -floor) || series.records.iter().all(|r| r.max_u <= floor)
}

/// `||u||_{L^1}` is constant for k = 1 and one-signed `u`.
pub fn check_l1_conservation(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("l1_conservation", series);
    let r = tri!(gate(r, series));
    let r = tri!(require_k1(r, series));
    if !u_one_signed(series) {
        return r.inapplicable("u changes sign during the run");
    }
    let l0 = series.records[0].l1_u;
    if l0 == 0.0 {
        return r.note("zero data").judge(0.0, L1_CONSERVATION);
    }
    let drift = series
        .records
        .iter()
        .map(|rec| (rec.l1_u - l0).abs() / l0)
        .fold(0.0, f64::max);
    r.param("initial_l1", l0).judge(drift, L1_CONSERVATION)
}

fn signed_k1(series: &DiagnosticsSeries, r: TheoremReport) -> Result<TheoremReport, TheoremReport> {
    let r = require_k1(r, series)?;
    let first = &series.records[0];
    match momentum_sign(first.min_m, first.max_m) {
        Signedness::Mixed => Err(r.inapplicable("m0 changes sign")),
        s => Ok(r.param("m0_sign", s.label())),
    }
}

/// `-u_x <= ||m0||_{L^1}` for k = 1 and one-signed `m0`.
pub fn check_slope_bound(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("slope_bound", series);
    let r = tri!(gate(r, series));
    let r = tri!(signed_k1(series, r));
    let kappa = series.records[0].l1_m;
    let worst = series.records.iter().map(|rec| rec.max_neg_ux).fold(f64::NEG_INFINITY, f64::max);
    r.param("kappa", kappa)
        .judge(worst, kappa * (1.0 + SLOPE_BOUND_REL) + SLOPE_BOUND_ABS)
}

/// `||u(t)||_{H^3} <= e^{kappa t / 2} ||u0||_{H^3}` for k = 1 and one-signed `m0`.
pub fn check_h3_growth(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("h3_growth", series);
    let r = tri!(gate(r, series));
    let r = tri!(signed_k1(series, r));
    let first = &series.records[0];
    let (kappa, h0) = (first.l1_m, first.h3);
    if h0 == 0.0 {
        return r.note("zero data").judge(0.0, 1.0 + H3_GROWTH_REL);
    }
    let ratio = series
        .records
        .iter()
        .map(|rec| rec.h3 / ((0.5 * kappa * (rec.t - first.t)).exp() * h0))
        .fold(0.0, f64::max);
    r.param("kappa", kappa)
        .note("measured is max_t ||u||_{H^3} / (e^{kappa t/2} ||u0||_{H^3})")
        .judge(ratio, 1.0 + H3_GROWTH_REL)
}

/// Differenced `dI/dt` against `int (-u_x)(2 u_xx^2 + u_xxx^2 / 2) dx`.
pub fn check_i_functional_identity(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("i_functional_identity", series);
    let r = tri!(gate(r, series));
    let r = tri!(require_k1(r, series));
    if series.records.len() < 3 {
        return r.inapplicable("at least three snapshots are needed to difference I[u]");
    }
    let res = series.records.iter().map(|rec| rec.di_dt_residual.abs()).fold(0.0, f64::max);
    let scale = series.records.iter().map(|rec| rec.di_dt_integral.abs()).fold(0.0, f64::max);
    let (measured, r) = if scale > 0.0 {
        (res / scale, r.note("residual relative to max_t |dI/dt|"))
    } else {
        (res, r.note("dI/dt vanishes identically; residual measured absolutely"))
    };
    r.param("max_abs_residual", res).param("max_abs_rate", scale).judge(measured, I_IDENTITY)
}

/// The support of `u` widens at the first snapshot after `t = 0`.
///
/// `measured` is the widening at that snapshot; the verdict requires it to
/// be strictly positive. Whether the widening stays monotone is recorded in
/// the `monotone` parameter.
pub fn check_support_spreading(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("support_spreading", series).param("threshold", series.support_threshold);
    if series.is_diverged() {
        let mut r = r.note("run diverged");
        r.verdict = Verdict::Diverged;
        r.measured = f64::NAN;
        return r;
    }
    let Some(first) = series.initial() else {
        return r.inapplicable("empty series");
    };
    let Some((lo0, hi0)) = first.support else {
        return r.inapplicable("u0 is zero at the support threshold");
    };
    let l = series.half_length;
    let dx = 2.0 * l / series.n_points as f64;
    if lo0 <= -l || hi0 >= l - dx {
        return r.inapplicable("u0 is not compactly supported inside the box at the threshold");
    }
    if series.records.len() < 2 {
        return r.inapplicable("no snapshot after t = 0");
    }
    let widths: Vec<(f64, f64)> = series
        .records
        .iter()
        .map(|rec| rec.support.unwrap_or((0.0, 0.0)))
        .collect();
    let (lo1, hi1) = widths[1];
    let widening = (lo0 - lo1).max(0.0) + (hi1 - hi0).max(0.0);
    let monotone = widths.windows(2).all(|w| w[1].0 <= w[0].0 && w[1].1 >= w[0].1);
    let verdict = if lo1 < lo0 || hi1 > hi0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    r.param("initial_support", json!([lo0, hi0]))
        .param("first_support", json!([lo1, hi1]))
        .param("final_support", json!(widths.last().copied().map(|(a, b)| [a, b])))
        .param("first_t", series.records[1].t)
        .param("monotone", monotone)
        .note("data in Gevrey classes cannot be compactly supported; the test uses a smooth non-analytic bump")
        .with_verdict(widening, 0.0, verdict)
}

/// Running max of `|d/dt ||u||_{H^s}| / (||u||_{C^1} ||u||_{H^s})`, an empirical `c_s`.
///
/// Uses the first requested Sobolev index, or `s = 3`. Only finiteness is asserted.
pub fn check_energy_estimate(series: &DiagnosticsSeries) -> TheoremReport {
    let r = base("energy_estimate", series);
    let r = tri!(gate(r, series));
    let (s, values): (f64, Vec<f64>) = match series.spec.sobolev.first() {
        Some(&s) => (s, series.records.iter().map(|rec| rec.hs[0]).collect()),
        None => (3.0, series.records.iter().map(|rec| rec.h3).collect()),
    };
    let r = r.param("s", s);
    if series.records.len() < 2 {
        return r.inapplicable("at least two snapshots are needed");
    }
    let rates = time_derivative(&series.times(), &values);
    let mut cs = 0.0f64;
    for ((rate, hs), rec) in rates.iter().zip(&values).zip(&series.records) {
        let denom = rec.c1 * hs;
        if denom > 0.0 {
            cs = cs.max(rate.abs() / denom);
        } else if *rate != 0.0 {
            cs = f64::INFINITY;
        }
    }
    let verdict = if cs.is_finite() { Verdict::Pass } else { Verdict::Fail };
    r.note("the constant is unspecified; only boundedness is checked")
        .with_verdict(cs, f64::MAX, verdict)
}

/// Claim ids understood by [`run_check`].
pub const CLAIM_IDS: &[&str] = &[
    "mean_conservation",
    "sign_invariance",
    "l1_conservation",
    "slope_bound",
    "h3_growth",
    "i_functional_identity",
    "support_spreading",
    "energy_estimate",
];

/// Dispatches a series-only check by claim id.
pub fn run_check(claim: &str, series: &DiagnosticsSeries) -> Option<TheoremReport> {
    Some(match claim {
        "mean_conservation" => check_mean_conservation(series),
        "sign_invariance" => check_sign_invariance(series),
        "l1_conservation" => check_l1_conservation(series),
        "slope_bound" => check_slope_bound(series),
        "h3_growth" => check_h3_growth(series),
        "i_functional_identity" => check_i_functional_identity(series),
        "support_spreading" => check_support_spreading(series),
        "energy_estimate" => check_energy_estimate(series),
        _ => return None,
    })
}
