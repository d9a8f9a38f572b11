//! Named, reproducible checks of the solution properties, each producing a
//! [`TheoremReport`] with a pass/fail verdict against a pinned tolerance.

mod checks;
mod diagnostics;
mod lifespan;
mod radius_bound;
mod report;
pub mod tolerances;
mod transport;

pub use checks::{
    check_energy_estimate, check_h3_growth, check_i_functional_identity, check_l1_conservation,
    check_mean_conservation, check_sign_invariance, check_slope_bound, check_support_spreading,
    momentum_sign, run_check, Signedness, CLAIM_IDS,
};
pub use diagnostics::{
    i_functional, i_functional_rate, record, support_interval, time_derivative, DiagnosticRecord,
    DiagnosticsRecorder, DiagnosticsSeries, DiagnosticsSpec, KatoMasudaSpec,
};
pub use lifespan::{
    lifespan_bound, lifespan_constant, lifespan_constant_exact, lifespan_from_norm, lifespan_report,
};
pub use radius_bound::{
    check_radius_bound, double_exponential_bound, initial_km_norm, radius_coefficients,
    radius_exponent, radius_lower_bound, series_mu,
};
pub use report::{TheoremReport, Verdict};
pub use transport::{check_transport, transport_report};

#[cfg(test)]
mod tests;
