use crate::characteristics::{default_seeds, evolve_flow, final_transport_residual, FlowEvolution};
use crate::dynamics::{ModelParams, State};
use crate::error::Result;
use crate::scalar::{to_f64, Real};

use super::report::{TheoremReport, Verdict};

/// Particle flow through `snapshots` and `m(t, y(t, x)) - m0(x)` at the last one.
///
/// Passes when the residual is within `tolerance` and every flow map is monotone.
pub fn check_transport<T: Real>(
    snapshots: &[State<T>],
    p: ModelParams,
    tolerance: f64,
) -> Result<TheoremReport> {
    let Some(first) = snapshots.first() else {
        return Ok(TheoremReport::new("transport").param("k", p.k).inapplicable("no snapshots"));
    };
    let seeds = default_seeds(first.u.grid());
    let flow = evolve_flow(snapshots, p, &seeds)?;
    transport_report(&flow, snapshots, p, tolerance)
}

/// Report for an already evolved `flow` through `snapshots`.
pub fn transport_report<T: Real>(
    flow: &FlowEvolution<T>,
    snapshots: &[State<T>],
    p: ModelParams,
    tolerance: f64,
) -> Result<TheoremReport> {
    let r = TheoremReport::new("transport").param("k", p.k).param("snapshots", snapshots.len());
    let residual = to_f64(final_transport_residual(flow, snapshots)?);
    let monotone = flow.is_monotone();
    let verdict = if residual <= tolerance && monotone {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut r = r
        .param("t", to_f64(flow.last().t))
        .param("monotone", monotone)
        .param("max_displacement", to_f64(flow.last().max_displacement()))
        .with_verdict(residual, tolerance, verdict);
    if !monotone {
        r = r.note(format!("flow maps lost monotonicity at snapshots {:?}", flow.monotonicity_violations));
    }
    Ok(r)
}
