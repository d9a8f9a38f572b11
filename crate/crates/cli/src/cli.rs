//! Command line front end.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use zeroeq::characteristics::{default_seeds, evolve_flow};
use zeroeq::dynamics::ModelParams;
use zeroeq::harness::{
    initial_km_norm, lifespan_constant, lifespan_constant_exact, lifespan_from_norm, radius_exponent,
    series_mu, transport_report, TheoremReport, Verdict,
};
use zeroeq::initial::sample;
use zeroeq::spaces::{
    analyticity_radius, c1_norm, em_norm, gevrey_norm, kato_masuda_last_term_ratio, kato_masuda_sq,
    l1_norm, sobolev_norm, GevreyParams, NormTruncation, Radius,
};
use zeroeq::spectral::{Field, Grid};

use crate::config::{parse_config, preset, InitialFamily, InitialSection, RunConfig, PRESETS};
use crate::error::{exit, CliError};
use crate::output::{diagnostics_csv, num, read_field, to_json, OutputDir};
use crate::plot::{render, Plot, Series};
use crate::run::{exit_status, run_experiment, simulate, summary_line};
use crate::sweep::{apply_overrides, parse_axis, parse_sets, sweep};

#[derive(Parser, Debug)]
#[command(name = "zeroeq", version, about = "Simulate m_t + u^k m_x = 0 and check properties of its solutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate and write diagnostics, without running checks.
    Simulate(SourceArgs),
    /// Integrate and run the configured checks.
    Verify(SourceArgs),
    /// Norm report for one sampled function.
    Norms(NormsArgs),
    /// Guaranteed existence time and the constant kappa_m.
    Lifespan(LifespanArgs),
    /// Fitted analyticity radius along a run against its lower bound.
    RadiusTrack(RadiusArgs),
    /// Particle flow and transport residual.
    Characteristics(FlowArgs),
    /// Cartesian parameter sweep, one output directory per point.
    Sweep(SweepArgs),
    /// List the presets, or print one as TOML.
    Presets {
        name: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// TOML run configuration.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named reference configuration (see `zeroeq presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Override a key, e.g. `--set solver.dt=5e-4`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory; defaults to `output.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NormsArgs {
    /// CSV file with columns `x,u`.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// Sample a named family instead of reading a file.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<InitialFamily>,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub center: f64,
    #[arg(long, default_value_t = 20.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 512)]
    pub n_points: usize,
    /// Sobolev index used by the Gevrey and Kato-Masuda norms.
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    /// Gevrey strip parameter.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub km_sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub em_sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub max_j: usize,
}

#[derive(Args, Debug)]
pub struct LifespanArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 1.0)]
    pub cm: f64,
    /// `E_{sigma0,m}` norm of the initial data.
    #[arg(long, conflicts_with = "input")]
    pub norm: Option<f64>,
    /// Compute the norm from a `x,u` CSV file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub max_j: usize,
    /// Print kappa_m for k = 1..=kmax instead.
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = 6)]
    pub kmax: u32,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// `sigma0 < 0` of the bound; defaults to `checks.radius_sigma0`.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma0: Option<f64>,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Defaults to `checks.transport_tolerance`.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Write every n-th particle path to `flow.csv`.
    #[arg(long, default_value_t = 8)]
    pub seed_stride: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sweep axis `KEY=V1,V2,...`; repeat for a cartesian product.
    #[arg(long = "param", value_name = "KEY=V1,V2,...", required = true)]
    pub params: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Integrate only; skip the checks.
    #[arg(long)]
    pub no_checks: bool,
}

fn parse_family(s: &str) -> Result<InitialFamily, String> {
    serde_json::from_value(json!(s)).map_err(|_| {
        "expected one of gaussian_u, gaussian_momentum, poisson_kernel, smooth_bump, single_mode".to_string()
    })
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run_cli<I, A>(args: I) -> u8
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn load_config(src: &SourceArgs) -> Result<(RunConfig, PathBuf), CliError> {
    let base = match (&src.config, &src.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_config(&text)?
        }
        (None, Some(name)) => preset(name).ok_or_else(|| {
            CliError::Usage(format!("unknown preset {name:?}; available: {}", PRESETS.join(", ")))
        })?,
        (None, None) => return Err(CliError::Usage("one of --config or --preset is required".into())),
    };
    let cfg = apply_overrides(&base, &parse_sets(&src.set)?)?;
    let out = src.out.clone().unwrap_or_else(|| cfg.output.directory.clone());
    Ok((cfg, out))
}

fn print_reports(reports: &[TheoremReport]) {
    for r in reports {
        println!("{}", summary_line(r));
        if r.claim_id == "lifespan_constant" {
            if let (Some(k), Some(exact)) = (r.parameters.get("k"), r.parameters.get("kappa_exact")) {
                println!("    k = {k}: kappa_m = {} at c_m = 1", exact.as_str().unwrap_or("?"));
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::Simulate(src) => {
            let (cfg, out) = load_config(&src)?;
            let o = run_experiment(&cfg, &out, false)?;
            println!("{} snapshots written to {}", o.series.records.len(), out.display());
            if let zeroeq::dynamics::RunStatus::Diverged { t, reason } = &o.series.status {
                println!("diverged at t = {t}: {reason}");
            }
            Ok(o.exit_code)
        }
        Command::Verify(src) => {
            let (cfg, out) = load_config(&src)?;
            if cfg.checks.claims.is_empty() {
                return Err(CliError::Usage("no checks requested (checks.claims is empty)".into()));
            }
            let o = run_experiment(&cfg, &out, true)?;
            print_reports(&o.reports);
            Ok(o.exit_code)
        }
        Command::Norms(a) => norms(a),
        Command::Lifespan(a) => lifespan(a),
        Command::RadiusTrack(a) => radius_track(a),
        Command::Characteristics(a) => characteristics(a),
        Command::Sweep(a) => {
            let (cfg, out) = load_config(&a.source)?;
            let axes = a.params.iter().map(|p| parse_axis(p)).collect::<Result<Vec<_>, _>>()?;
            let (entries, code) = sweep(&cfg, &axes, &out, a.jobs, !a.no_checks)?;
            for e in &entries {
                println!("{}  exit {}  {}", e.directory, e.exit_code, serde_json::Value::Object(e.parameters.clone()));
            }
            Ok(code)
        }
        Command::Presets { name } => match name {
            None => {
                for p in PRESETS {
                    println!("{p}");
                }
                Ok(exit::OK)
            }
            Some(n) => {
                let cfg = preset(&n).ok_or_else(|| CliError::Usage(format!("unknown preset {n:?}")))?;
                print!("{}", cfg.to_toml());
                Ok(exit::OK)
            }
        },
    }
}

fn norms(a: NormsArgs) -> Result<u8, CliError> {
    let f: Field<f64> = match (&a.input, a.family) {
        (Some(p), _) => read_field(p)?,
        (None, Some(family)) => {
            let named = family.named().ok_or_else(|| CliError::Usage("use --input for file data".into()))?;
            let grid = Grid::new(a.half_length, a.n_points)?;
            let init = InitialSection { amplitude: a.amplitude, width: a.width, center: a.center, ..InitialSection::family(family) };
            sample(&grid, named, &init.params())?
        }
        (None, None) => return Err(CliError::Usage("one of --input or --family is required".into())),
    };
    let trunc = NormTruncation { max_j: a.max_j };
    let g = f.grid();
    let gev = gevrey_norm(&f, GevreyParams { sigma: a.sigma, s: a.s })?;
    let radius = if f.max_abs() > 0.0 {
        let est = analyticity_radius(&f)?;
        json!({
            "kind": if matches!(est.radius, Radius::Infinite) { "infinite" } else { "finite" },
            "value": est.radius.value(),
            "fit_quality": est.fit_quality,
            "low_quality": est.low_quality,
            "points": est.points,
        })
    } else {
        json!(null)
    };
    let edge = {
        let v = f.values();
        if f.max_abs() > 0.0 { v[0].abs().max(v[v.len() - 1].abs()) / f.max_abs() } else { 0.0 }
    };
    let report = json!({
        "half_length": g.half_length(),
        "n_points": g.len(),
        "edge_ratio": edge,
        "l1": l1_norm(&f),
        "c1": c1_norm(&f),
        "sobolev": {
            "h0": sobolev_norm(&f, 0.0),
            "h1": sobolev_norm(&f, 1.0),
            "h2": sobolev_norm(&f, 2.0),
            "h3": sobolev_norm(&f, 3.0),
        },
        "gevrey": {
            "sigma": a.sigma, "s": a.s, "value": gev.value,
            "tail_fraction": gev.tail_fraction, "tail_dominated": gev.tail_dominated,
        },
        "kato_masuda_sq": {
            "sigma": a.km_sigma, "s": a.s, "max_j": a.max_j,
            "value": kato_masuda_sq(&f, a.km_sigma, a.s, trunc)?,
            "last_term_ratio": kato_masuda_last_term_ratio(&f, a.km_sigma, a.s, trunc)?,
        },
        "em_norm": {
            "sigma": a.em_sigma, "m": a.m, "max_j": a.max_j,
            "value": em_norm(&f, a.em_sigma, a.m, trunc)?,
        },
        "radius": radius,
    });
    print!("{}", to_json(&report));
    Ok(exit::OK)
}

fn lifespan(a: LifespanArgs) -> Result<u8, CliError> {
    if a.table {
        let cm = num_rational::BigRational::from_float(a.cm)
            .ok_or_else(|| CliError::Usage(format!("--cm must be finite, got {}", a.cm)))?;
        println!("k  kappa_m (exact)  kappa_m");
        for k in 1..=a.kmax {
            let exact = lifespan_constant_exact(k, &cm)?;
            println!("{k}  {exact}  {}", num(lifespan_constant(k, a.cm)?));
        }
        return Ok(exit::OK);
    }
    let norm = match (a.norm, &a.input) {
        (Some(n), _) => n,
        (None, Some(p)) => {
            let f = read_field(p)?;
            em_norm(&f, a.sigma0, a.m, NormTruncation { max_j: a.max_j })?
        }
        (None, None) => return Err(CliError::Usage("one of --norm, --input or --table is required".into())),
    };
    if a.m < 3 {
        return Err(CliError::Usage(format!("--m must be >= 3, got {}", a.m)));
    }
    let t = lifespan_from_norm(a.k, norm, a.sigma0, a.sigma, a.cm)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{}", num(t));
    Ok(exit::OK)
}

fn radius_track(a: RadiusArgs) -> Result<u8, CliError> {
    let (mut cfg, out) = load_config(&a.source)?;
    if let Some(s) = a.sigma0 {
        cfg.checks.radius_sigma0 = s;
    }
    cfg.checks.claims = vec!["radius_bound".into()];
    let o = run_experiment(&cfg, &out, true)?;
    print_reports(&o.reports);
    let sigma0 = cfg.checks.radius_sigma0;
    let u0 = crate::run::initial_data(&cfg)?;
    let km = initial_km_norm(&u0, sigma0, NormTruncation { max_j: cfg.checks.max_j })?;
    let mu = series_mu(&o.series);
    let t0 = o.series.records.first().map_or(0.0, |r| r.t);
    let mut csv = String::from("t,radius_fit,radius_fit_quality,sigma_t,lower_bound,log10_ratio\n");
    let mut fit = Vec::new();
    let mut bound = Vec::new();
    for r in &o.series.records {
        let sigma = radius_exponent(r.t - t0, sigma0, km, mu)?;
        let b = sigma.exp();
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(r.t),
            num(r.radius_fit),
            num(r.radius_fit_quality),
            num(sigma),
            num(b),
            num((r.radius_fit.ln() - sigma) / std::f64::consts::LN_10)
        ));
        fit.push((r.t, r.radius_fit));
        bound.push((r.t, b));
    }
    let dir = OutputDir::create(&out)?;
    dir.write("radius_track.csv", &csv)?;
    if cfg.output.plots {
        let plot = Plot::new("Analyticity radius and lower bound", "t", "radius")
            .log_y()
            .with(Series::new("fitted", fit))
            .with(Series::new("lower bound", bound));
        dir.write("plots/radius_track.svg", &render(&plot))?;
    }
    Ok(o.exit_code)
}

fn characteristics(a: FlowArgs) -> Result<u8, CliError> {
    let (mut cfg, out) = load_config(&a.source)?;
    if let Some(t) = a.tolerance {
        cfg.checks.transport_tolerance = t;
    }
    cfg.checks.claims = vec!["transport".into()];
    cfg.validate()?;
    if a.seed_stride == 0 {
        return Err(CliError::Usage("--seed-stride must be >= 1".into()));
    }
    let sim = simulate(&cfg, true)?;
    let snaps = sim.snapshots.as_deref().unwrap_or_default();
    let p = ModelParams::new(cfg.model.k)?;
    let seeds = default_seeds(sim.u0.grid());
    let flow = evolve_flow(snaps, p, &seeds)?;
    let report = if sim.series.is_diverged() {
        let mut r = TheoremReport::new("transport").note("run diverged");
        r.verdict = Verdict::Diverged;
        r.measured = f64::NAN;
        r
    } else {
        transport_report(&flow, snaps, p, cfg.checks.transport_tolerance)?
    };
    let reports = vec![report];
    print_reports(&reports);

    let dir = OutputDir::create(&out)?;
    let mut resolved = cfg.clone();
    resolved.output.directory = out.clone();
    dir.write("resolved_config.toml", &resolved.to_toml())?;
    dir.write("diagnostics.csv", &diagnostics_csv(&sim.series))?;
    dir.write("reports.json", &to_json(&reports))?;
    let picked: Vec<usize> = (0..seeds.len()).step_by(a.seed_stride).collect();
    let mut csv = String::from("t");
    for &i in &picked {
        csv.push_str(&format!(",y_{i}"));
    }
    csv.push('\n');
    for map in &flow.maps {
        csv.push_str(&num(map.t));
        for &i in &picked {
            csv.push(',');
            csv.push_str(&num(map.positions[i]));
        }
        csv.push('\n');
    }
    dir.write("flow.csv", &csv)?;
    if cfg.output.plots {
        let mut plot = Plot::new("Particle paths y(t, x)", "t", "y");
        let every = (picked.len() / 16).max(1);
        for &i in picked.iter().step_by(every) {
            plot = plot.with(Series::new(
                format!("x = {:.2}", seeds[i]),
                flow.maps.iter().map(|m| (m.t, m.positions[i])).collect(),
            ));
        }
        dir.write("plots/flow.svg", &render(&plot))?;
    }
    Ok(exit_status(&sim.series.status, &reports))
}
