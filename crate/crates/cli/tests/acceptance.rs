//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use tempfile::TempDir;
use zeroeq::dynamics::{integrate, ModelParams, SolverConfig, State};
use zeroeq::harness::{lifespan_constant, lifespan_constant_exact, TheoremReport, Verdict};
use zeroeq::initial::{sample, Family, FamilyParams};
use zeroeq::spaces::{analyticity_radius, sobolev_norm};
use zeroeq::spectral::{convolution_oracle, helmholtz_inverse, Grid};
use zeroeq::{Field64, Grid64};
use zeroeq_cli::{preset, run_experiment, RunConfig, RunOutcome, PRESETS};

const KAPPA_REL: f64 = 1e-15;
const HELMHOLTZ_ORACLE: f64 = 1e-6;
const NORM_IDENTITY: f64 = 1e-10;
const CONSERVATION: f64 = 1e-7;
const SIGN: f64 = 1e-6;
const TRANSPORT: f64 = 1e-4;
const TRANSPORT_DTS: [f64; 3] = [0.2, 0.1, 0.05];
const TRANSPORT_ORDER: (f64, f64) = (3.5, 4.5);
const LEMMA_REL: f64 = 1e-6;
const I_IDENTITY: f64 = 1e-3;
const I_RATIO: (f64, f64) = (3.5, 4.5);
const RADIUS_REL: f64 = 0.05;
const TIME_ORDER: (f64, f64) = (3.8, 4.2);
const SPATIAL: f64 = 1e-8;

type Outcome = Result<String, String>;

struct Suite {
    tmp: TempDir,
    failures: usize,
}

impl Suite {
    fn run(&mut self, id: usize, name: &str, f: impl FnOnce(&Path) -> Outcome) {
        let dir = self.tmp.path().join(format!("c{id:02}"));
        fs::create_dir_all(&dir).unwrap();
        let start = Instant::now();
        let res = f(&dir);
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {id:>2} PASS  {name:<28} {detail}  [{secs:.1}s]"),
            Err(detail) => {
                self.failures += 1;
                println!("criterion {id:>2} FAIL  {name:<28} {detail}  [{secs:.1}s]");
            }
        }
    }
}

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg) }
}

fn preset_cfg(name: &str) -> RunConfig {
    let mut cfg = preset(name).expect("known preset");
    cfg.output.plots = false;
    cfg
}

fn run(cfg: &RunConfig, dir: &Path) -> Result<RunOutcome, String> {
    run_experiment(cfg, dir, true).map_err(|e| e.to_string())
}

fn report<'a>(o: &'a RunOutcome, claim: &str) -> Result<&'a TheoremReport, String> {
    o.reports.iter().find(|r| r.claim_id == claim).ok_or_else(|| format!("no {claim} report"))
}

fn passing(o: &RunOutcome, claim: &str, tol: f64) -> Result<f64, String> {
    let r = report(o, claim)?;
    ensure(
        r.verdict == Verdict::Pass && r.measured <= tol,
        format!("{claim}: {:?} measured {:e} over {tol:e}", r.verdict, r.measured),
    )?;
    Ok(r.measured)
}

fn gaussian_u(grid: &Grid64, width: f64) -> Field64 {
    sample(grid, Family::GaussianU, &FamilyParams { width, ..Default::default() }).unwrap()
}

fn lifespan_constants(_: &Path) -> Outcome {
    let one = BigRational::from_integer(1.into());
    for (k, den) in [(1u32, 144), (2, 1144)] {
        let exact = lifespan_constant_exact(k, &one).map_err(|e| e.to_string())?;
        let want = BigRational::new(1.into(), den.into());
        ensure(exact == want, format!("kappa_{k} = {exact}, want 1/{den}"))?;
        let float = lifespan_constant(k, 1.0).map_err(|e| e.to_string())?;
        let rel = (float - 1.0 / den as f64).abs() * den as f64;
        ensure(rel <= KAPPA_REL, format!("kappa_{k} float relative error {rel:e}"))?;
    }
    Ok("kappa_1 = 1/144, kappa_2 = 1/1144 exact".into())
}

fn helmholtz(_: &Path) -> Outcome {
    let grid = Grid::new(20.0, 512).unwrap();
    let mut worst = 0.0f64;
    let mut worst_norm = 0.0f64;
    for width in [1.0, 2.0] {
        let f = gaussian_u(&grid, width);
        let fast = helmholtz_inverse(&f);
        let oracle = convolution_oracle(&f);
        ensure(oracle.edge_decay_ok, "test data does not decay at the edges".into())?;
        worst = worst.max(fast.max_abs_diff(&oracle.field).unwrap() / f.max_abs());
        for s in [0.0, 1.0, 2.5] {
            let lhs = sobolev_norm(&fast, s + 2.0);
            let rhs = sobolev_norm(&f, s);
            worst_norm = worst_norm.max((lhs - rhs).abs() / rhs);
        }
    }
    ensure(worst <= HELMHOLTZ_ORACLE, format!("oracle mismatch {worst:e}"))?;
    ensure(worst_norm <= NORM_IDENTITY, format!("norm identity {worst_norm:e}"))?;
    Ok(format!("oracle {worst:.2e}, norm identity {worst_norm:.2e}"))
}

fn conservation(dir: &Path) -> Outcome {
    let cfg = preset_cfg("conservation_k1");
    ensure(
        cfg.model.k == 1 && cfg.solver.t_end == 2.0 && cfg.grid.n_points == 512 && cfg.solver.dt == 1e-3,
        "conservation_k1 preset drifted from k = 1, t in [0, 2], N = 512, dt = 1e-3".into(),
    )?;
    let o = run(&cfg, dir)?;
    let mean = passing(&o, "mean_conservation", CONSERVATION)?;
    let l1 = passing(&o, "l1_conservation", CONSERVATION)?;
    Ok(format!("mean drift {mean:.2e}, L1 drift {l1:.2e}"))
}

fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

fn sign_and_transport(dir: &Path) -> Outcome {
    let mut summary = Vec::new();
    for k in 1..=3u32 {
        let name = format!("theorem12_k{k}");
        let cfg = preset_cfg(&name);
        ensure(cfg.solver.t_end == 1.0, format!("{name} does not run to t = 1"))?;
        let o = run(&cfg, &dir.join(&name))?;
        let sign = passing(&o, "sign_invariance", SIGN)?;
        let tr = passing(&o, "transport", TRANSPORT)?;

        let mut residuals = Vec::new();
        for (i, dt) in TRANSPORT_DTS.iter().enumerate() {
            let mut c = cfg.clone();
            c.solver.dt = *dt;
            c.checks.claims = vec!["transport".into()];
            let o = run(&c, &dir.join(format!("{name}_dt{i}")))?;
            residuals.push(report(&o, "transport")?.measured);
        }
        let orders: Vec<f64> = residuals.windows(2).map(|w| observed_order(w[0], w[1])).collect();
        for p in &orders {
            ensure(
                (TRANSPORT_ORDER.0..=TRANSPORT_ORDER.1).contains(p),
                format!("k = {k}: transport order {p:.2} from residuals {residuals:?}"),
            )?;
        }
        summary.push(format!("k={k} sign {sign:.1e} transport {tr:.1e} order {:.2}/{:.2}", orders[0], orders[1]));
    }
    Ok(summary.join("; "))
}

fn lemma_bounds(dir: &Path) -> Outcome {
    let cfg = preset_cfg("lemma52");
    ensure(cfg.model.k == 1 && cfg.solver.t_end == 2.0, "lemma52 preset drifted from k = 1, t in [0, 2]".into())?;
    let o = run(&cfg, dir)?;
    let mut detail = Vec::new();
    let kappa = report(&o, "slope_bound")?.parameters["kappa"].as_f64().ok_or("slope_bound has no kappa")?;
    // slope: max(-u_x) against kappa; growth: H3 norm over e^{kappa t/2} ||u0||_{H3}.
    for (claim, bound) in [("slope_bound", kappa), ("h3_growth", 1.0)] {
        let r = report(&o, claim)?;
        let limit = bound * (1.0 + LEMMA_REL);
        ensure(
            r.verdict == Verdict::Pass && r.measured <= limit,
            format!("{claim}: {:?} measured {:e} over {limit:e}", r.verdict, r.measured),
        )?;
        detail.push(format!("{claim} {:.6} <= {limit:.6}", r.measured));
    }
    Ok(detail.join(", "))
}

fn i_identity(dir: &Path) -> Outcome {
    let base = preset_cfg("i_identity");
    let mut residuals = Vec::new();
    for (i, dt) in [1e-3, 5e-4].into_iter().enumerate() {
        let mut cfg = base.clone();
        cfg.solver.dt = dt;
        let o = run(&cfg, &dir.join(format!("dt{i}")))?;
        residuals.push(passing(&o, "i_functional_identity", I_IDENTITY)?);
    }
    let ratio = residuals[0] / residuals[1];
    ensure((I_RATIO.0..=I_RATIO.1).contains(&ratio), format!("residual ratio {ratio:.2} from {residuals:?}"))?;
    Ok(format!("relative residual {:.2e}, ratio on halving dt {ratio:.2}", residuals[0]))
}

fn support(dir: &Path) -> Outcome {
    let cfg = preset_cfg("support_spreading");
    ensure(
        cfg.solver.dt == 1e-3 && cfg.solver.t_end == 0.1 && cfg.solver.snapshot_stride == 1 && cfg.initial.width == 1.0,
        "support_spreading preset drifted from a [-1, 1] bump with dt = 1e-3 to t = 0.1".into(),
    )?;
    let o = run(&cfg, dir)?;
    let r = report(&o, "support_spreading")?;
    ensure(r.verdict == Verdict::Pass, format!("{:?}: {}", r.verdict, r.notes.join("; ")))?;
    ensure(r.parameters["monotone"] == true, "widening is not monotone".into())?;
    Ok(format!(
        "initial {} first step {} widening {:.3}",
        r.parameters["initial_support"], r.parameters["first_support"], r.measured
    ))
}

fn radius(dir: &Path) -> Outcome {
    let grid = Grid::new(20.0, 512).unwrap();
    let mut fits = Vec::new();
    for a in [1.0, 1.5, 2.0] {
        let f = sample(&grid, Family::PoissonKernel, &FamilyParams { width: a, ..Default::default() }).unwrap();
        let r = analyticity_radius(&f).map_err(|e| e.to_string())?.radius.value();
        ensure((r - a).abs() <= RADIUS_REL * a, format!("a = {a}: fitted {r}"))?;
        fits.push(format!("{r:.3}"));
    }
    let g = analyticity_radius(&gaussian_u(&grid, 1.0)).map_err(|e| e.to_string())?;
    ensure(g.radius.is_infinite(), format!("gaussian radius {:?}", g.radius))?;

    let o = run(&preset_cfg("radius_k1"), dir)?;
    let r = report(&o, "radius_bound")?;
    ensure(r.verdict == Verdict::Pass && r.measured >= 1.0, format!("bound ratio {:e} {:?}", r.measured, r.verdict))?;
    Ok(format!("fits [{}] for a = [1, 1.5, 2], gaussian infinite, min fit/bound {:.3}", fits.join(", "), r.measured))
}

fn evolve(grid: &Grid64, dt: f64, t_end: f64) -> Result<Field64, String> {
    let u0 = sample(grid, Family::GaussianMomentum, &FamilyParams::default()).map_err(|e| e.to_string())?;
    let cfg = SolverConfig { dt, t_end, ..Default::default() };
    let run = integrate(State { t: 0.0, u: u0 }, &cfg, ModelParams::new(1).unwrap(), &mut [])
        .map_err(|e| e.to_string())?;
    ensure(!run.status.is_diverged(), format!("run diverged at dt = {dt}"))?;
    Ok(run.final_state.u)
}

fn convergence(_: &Path) -> Outcome {
    let grid = Grid::new(20.0, 512).unwrap();
    let u: Vec<Field64> = [0.1, 0.05, 0.025].iter().map(|&dt| evolve(&grid, dt, 1.0)).collect::<Result<_, _>>()?;
    let d1 = u[0].max_abs_diff(&u[1]).unwrap();
    let d2 = u[1].max_abs_diff(&u[2]).unwrap();
    let order = observed_order(d1, d2);
    ensure((TIME_ORDER.0..=TIME_ORDER.1).contains(&order), format!("temporal order {order:.3} ({d1:e}, {d2:e})"))?;

    // the reference N = 512 run against N = 1024; N = 256 is reported only,
    // its 2/3 cutoff sits inside the spectrum of the t = 1 solution.
    let at = |n: usize| evolve(&Grid::new(20.0, n).unwrap(), 1e-3, 1.0);
    let change = |coarse: &Field64, fine: &Field64| {
        let stride = fine.len() / coarse.len();
        coarse
            .values()
            .iter()
            .zip(fine.values().iter().step_by(stride))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let (u256, u512, u1024) = (at(256)?, at(512)?, at(1024)?);
    let spatial = change(&u512, &u1024);
    let under = change(&u256, &u512);
    ensure(spatial <= SPATIAL, format!("N = 512 vs 1024 differ by {spatial:e}"))?;
    Ok(format!("temporal order {order:.3}, N 512 vs 1024 change {spatial:.2e} (256 vs 512: {under:.2e})"))
}

fn determinism(dir: &Path) -> Outcome {
    for name in PRESETS {
        let cfg = preset_cfg(name);
        let a = dir.join(format!("{name}_a"));
        let b = dir.join(format!("{name}_b"));
        run(&cfg, &a)?;
        run(&cfg, &b)?;
        for file in ["diagnostics.csv", "reports.json"] {
            let x = fs::read(a.join(file)).map_err(|e| e.to_string())?;
            let y = fs::read(b.join(file)).map_err(|e| e.to_string())?;
            ensure(x == y, format!("{name}/{file} differs between runs"))?;
        }
    }
    Ok(format!("{} presets byte-identical", PRESETS.len()))
}

fn main() -> ExitCode {
    let mut suite = Suite { tmp: TempDir::new().expect("temp dir"), failures: 0 };
    suite.run(1, "lifespan constants", lifespan_constants);
    suite.run(2, "helmholtz consistency", helmholtz);
    suite.run(3, "k = 1 conservation", conservation);
    suite.run(4, "sign invariance, transport", sign_and_transport);
    suite.run(5, "slope and H3 bounds", lemma_bounds);
    suite.run(6, "I functional identity", i_identity);
    suite.run(7, "support spreading", support);
    suite.run(8, "analyticity radius", radius);
    suite.run(9, "convergence orders", convergence);
    suite.run(10, "determinism", determinism);
    if suite.failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria fail", suite.failures);
        ExitCode::FAILURE
    }
}
