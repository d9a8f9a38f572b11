//! Experiment orchestration: integrate, record, check, write artifacts.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::json;
use zeroeq::dynamics::{integrate, ModelParams, RunStatus, SnapshotRecorder, SolverConfig, State};
use zeroeq::harness::{
    check_radius_bound, check_transport, initial_km_norm, lifespan_bound, lifespan_report, run_check,
    DiagnosticsRecorder, DiagnosticsSeries, TheoremReport, Verdict,
};
use zeroeq::initial::sample;
use zeroeq::spaces::NormTruncation;
use zeroeq::spectral::{to_spectrum, Field, Grid};

use crate::config::{ConfigError, ConfigErrors, RunConfig};
use crate::error::{exit, CliError};
use crate::output::{diagnostics_csv, field_csv, read_field, to_json, OutputDir};
use crate::plot::{render, Plot, Series};

/// Largest k in the lifespan constant table.
pub const LIFESPAN_TABLE_K: u32 = 4;

/// Initial velocity described by the config.
pub fn initial_data(cfg: &RunConfig) -> Result<Field<f64>, CliError> {
    match (cfg.initial.family.named(), &cfg.initial.path) {
        (Some(family), _) => {
            let grid = Grid::new(cfg.grid.half_length, cfg.grid.n_points)?;
            sample(&grid, family, &cfg.initial.params()).map_err(|e| {
                CliError::Config(ConfigErrors(vec![ConfigError { path: "initial".into(), message: e.to_string() }]))
            })
        }
        (None, Some(path)) => {
            let f = read_field(path)?;
            let g = f.grid();
            if g.len() != cfg.grid.n_points || (g.half_length() - cfg.grid.half_length).abs() > 1e-9 * g.half_length() {
                return Err(CliError::Config(ConfigErrors(vec![ConfigError {
                    path: "initial.path".into(),
                    message: format!(
                        "file grid (half_length {}, n_points {}) does not match the grid section (half_length {}, n_points {})",
                        g.half_length(),
                        g.len(),
                        cfg.grid.half_length,
                        cfg.grid.n_points
                    ),
                }])));
            }
            Ok(f)
        }
        (None, None) => Err(CliError::Usage("initial.path: required when family = \"file\"".into())),
    }
}

pub fn solver_config(cfg: &RunConfig) -> SolverConfig<f64> {
    SolverConfig {
        dt: cfg.solver.dt,
        t_end: cfg.solver.t_end,
        dealias_fraction: cfg.solver.dealias_fraction,
        filter_on: cfg.solver.filter,
        c_m: cfg.constants.c_m,
        c_s: cfg.constants.c_s,
        snapshot_stride: cfg.solver.snapshot_stride,
        blowup_factor: cfg.solver.blowup_factor,
    }
}

/// Everything one integration produced.
pub struct Simulation {
    pub u0: Field<f64>,
    pub series: DiagnosticsSeries,
    pub snapshots: Option<Vec<State<f64>>>,
    pub final_state: State<f64>,
    pub warnings: Vec<String>,
}

/// Integrates the configured problem, keeping full snapshots when asked.
pub fn simulate(cfg: &RunConfig, keep_snapshots: bool) -> Result<Simulation, CliError> {
    let u0 = initial_data(cfg)?;
    let p = ModelParams::new(cfg.model.k)?;
    let solver = solver_config(cfg);
    let mut diag = DiagnosticsRecorder::<f64>::new(cfg.model.k, cfg.diagnostics.clone());
    let mut snaps = SnapshotRecorder::new();
    let out = {
        let mut observers: Vec<&mut dyn zeroeq::dynamics::Observer<f64>> = vec![&mut diag];
        if keep_snapshots {
            observers.push(&mut snaps);
        }
        integrate(State { t: 0.0, u: u0.clone() }, &solver, p, &mut observers)?
    };
    let series = diag.finish(out.status)?;
    Ok(Simulation {
        u0,
        series,
        snapshots: keep_snapshots.then_some(snaps.states),
        final_state: out.final_state,
        warnings: out.warnings,
    })
}

fn needs_snapshots(cfg: &RunConfig) -> bool {
    cfg.checks.claims.iter().any(|c| c == "transport")
}

/// Evaluates every requested claim, in request order.
pub fn evaluate_claims(cfg: &RunConfig, sim: &Simulation) -> Result<Vec<TheoremReport>, CliError> {
    let trunc = NormTruncation { max_j: cfg.checks.max_j };
    let mut reports = Vec::new();
    for claim in &cfg.checks.claims {
        if let Some(r) = run_check(claim, &sim.series) {
            reports.push(r);
            continue;
        }
        match claim.as_str() {
            "transport" => {
                let r = match &sim.snapshots {
                    _ if sim.series.is_diverged() => {
                        let mut r = TheoremReport::new("transport").note("run diverged");
                        r.verdict = Verdict::Diverged;
                        r.measured = f64::NAN;
                        r
                    }
                    Some(s) => check_transport(s, ModelParams::new(cfg.model.k)?, cfg.checks.transport_tolerance)?,
                    None => TheoremReport::new("transport").inapplicable("snapshots were not kept"),
                };
                reports.push(r);
            }
            "radius_bound" => {
                let sigma0 = cfg.checks.radius_sigma0;
                let km = initial_km_norm(&sim.u0, sigma0, trunc)?;
                reports.push(check_radius_bound(&sim.series, sigma0, km).param("max_j", trunc.max_j));
            }
            "lifespan_constant" => {
                for k in 1..=LIFESPAN_TABLE_K.max(cfg.model.k) {
                    reports.push(lifespan_report(k)?);
                }
            }
            "lifespan" => {
                let c = &cfg.checks;
                let t = lifespan_bound(
                    &sim.u0,
                    cfg.model.k,
                    c.lifespan_m,
                    c.lifespan_sigma0,
                    c.lifespan_sigma,
                    cfg.constants.c_m,
                    trunc,
                )?;
                let r = TheoremReport::new("lifespan")
                    .param("k", cfg.model.k)
                    .param("m", c.lifespan_m)
                    .param("sigma0", c.lifespan_sigma0)
                    .param("sigma", c.lifespan_sigma)
                    .param("c_m", cfg.constants.c_m)
                    .param("max_j", trunc.max_j)
                    .note("guaranteed existence time; a computed value, not a tolerance check");
                let verdict = if t > 0.0 { Verdict::Pass } else { Verdict::Fail };
                reports.push(r.with_verdict(t, 0.0, verdict));
            }
            other => return Err(CliError::Usage(format!("unknown claim id {other:?}"))),
        }
    }
    Ok(reports)
}

/// 2 on divergence, 1 on any failed check, 0 otherwise.
pub fn exit_status(status: &RunStatus, reports: &[TheoremReport]) -> u8 {
    if status.is_diverged() || reports.iter().any(|r| r.verdict == Verdict::Diverged) {
        exit::DIVERGED
    } else if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        exit::FAIL
    } else {
        exit::OK
    }
}

pub struct RunOutcome {
    pub exit_code: u8,
    pub series: DiagnosticsSeries,
    pub reports: Vec<TheoremReport>,
    pub directory: PathBuf,
}

/// Runs `cfg` and writes its artifacts under `out`. With `checks = false`
/// only the integration and its diagnostics are produced.
pub fn run_experiment(cfg: &RunConfig, out: &Path, checks: bool) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let started = Instant::now();
    let dir = OutputDir::create(out)?;
    let sim = simulate(cfg, checks && needs_snapshots(cfg))?;
    let reports = if checks { evaluate_claims(cfg, &sim)? } else { Vec::new() };
    let code = exit_status(&sim.series.status, &reports);

    let mut resolved = cfg.clone();
    resolved.output.directory = out.to_path_buf();
    dir.write("resolved_config.toml", &resolved.to_toml())?;
    dir.write("diagnostics.csv", &diagnostics_csv(&sim.series))?;
    if checks {
        dir.write("reports.json", &to_json(&reports))?;
    }
    dir.write("field_initial.csv", &field_csv(&sim.u0))?;
    dir.write("field_final.csv", &field_csv(&sim.final_state.u))?;
    if cfg.output.plots {
        write_plots(&dir, &sim)?;
    }
    let log = run_log(&sim, &reports, code, started);
    dir.write("run.log", &log)?;
    Ok(RunOutcome {
        exit_code: code,
        series: sim.series,
        reports,
        directory: out.to_path_buf(),
    })
}

fn run_log(sim: &Simulation, reports: &[TheoremReport], code: u8, started: Instant) -> String {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut s = format!("finished_unix_seconds = {stamp}\nelapsed_seconds = {:.3}\n", started.elapsed().as_secs_f64());
    s.push_str(&format!("status = {}\n", json!(sim.series.status)));
    s.push_str(&format!("snapshots = {}\nexit_code = {code}\n", sim.series.records.len()));
    for w in &sim.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    for r in reports {
        s.push_str(&format!("{}\n", summary_line(r)));
    }
    s
}

pub fn summary_line(r: &TheoremReport) -> String {
    let verdict = match r.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Inapplicable => "inapplicable",
        Verdict::Diverged => "diverged",
    };
    format!("{:<22} {:<12} measured {:.6e}  tolerance {:.3e}", r.claim_id, verdict, r.measured, r.tolerance)
}

fn write_plots(dir: &OutputDir, sim: &Simulation) -> Result<(), CliError> {
    let rec = &sim.series.records;
    let col = |f: &dyn Fn(&zeroeq::harness::DiagnosticRecord) -> f64| -> Vec<(f64, f64)> {
        rec.iter().map(|r| (r.t, f(r))).collect()
    };
    let norms = Plot::new("Norms along the run", "t", "value")
        .log_y()
        .with(Series::new("||u||_H1", col(&|r| r.h1)))
        .with(Series::new("||u||_H3", col(&|r| r.h3)))
        .with(Series::new("||m||_L1", col(&|r| r.l1_m)))
        .with(Series::new("||u||_C1", col(&|r| r.c1)))
        .with(Series::new("I[u]", col(&|r| r.i_functional)));
    dir.write("plots/norms.svg", &render(&norms))?;

    let spectrum = |f: &Field<f64>| -> Vec<(f64, f64)> {
        let s = to_spectrum(f);
        let g = s.grid();
        let mut pts: Vec<(f64, f64)> = (0..g.len())
            .filter(|&i| g.wavenumber(i) >= 0.0)
            .map(|i| (g.wavenumber(i), s.coeffs()[i].norm()))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    };
    let spec = Plot::new("Spectrum decay", "xi", "|u^(xi)|")
        .log_y()
        .with(Series::new("t = 0", spectrum(&sim.u0)))
        .with(Series::new(format!("t = {:.4}", sim.final_state.t), spectrum(&sim.final_state.u)));
    dir.write("plots/spectrum.svg", &render(&spec))?;

    let support = Plot::new("Support of u", "t", "x")
        .with(Series::new("lower end", rec.iter().filter_map(|r| r.support.map(|s| (r.t, s.0))).collect()))
        .with(Series::new("upper end", rec.iter().filter_map(|r| r.support.map(|s| (r.t, s.1))).collect()));
    dir.write("plots/support.svg", &render(&support))?;

    let radius = Plot::new("Fitted analyticity radius", "t", "radius")
        .with(Series::new("fit", col(&|r| r.radius_fit)));
    dir.write("plots/radius.svg", &render(&radius))?;
    Ok(())
}
