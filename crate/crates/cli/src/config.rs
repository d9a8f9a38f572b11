//! Run configuration: TOML schema, defaults, validation and presets.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use zeroeq::harness::{DiagnosticsSpec, KatoMasudaSpec, CLAIM_IDS};
use zeroeq::initial::{Family, FamilyParams};
use zeroeq::spaces::NormTruncation;

/// Checks that need more than the diagnostics series.
pub const EXTRA_CLAIMS: &[&str] = &["transport", "radius_bound", "lifespan_constant", "lifespan"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSpec,
    #[serde(default)]
    pub checks: ChecksSection,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub k: u32,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { k: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub half_length: f64,
    pub n_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { half_length: 20.0, n_points: 512 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub dt: f64,
    pub t_end: f64,
    pub dealias_fraction: f64,
    pub filter: bool,
    pub snapshot_stride: usize,
    pub blowup_factor: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            dealias_fraction: 2.0 / 3.0,
            filter: false,
            snapshot_stride: 10,
            blowup_factor: 1e6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialFamily {
    GaussianU,
    GaussianMomentum,
    PoissonKernel,
    SmoothBump,
    SingleMode,
    /// Samples read from a CSV file with columns `x,u`.
    File,
}

impl InitialFamily {
    pub fn named(self) -> Option<Family> {
        Some(match self {
            InitialFamily::GaussianU => Family::GaussianU,
            InitialFamily::GaussianMomentum => Family::GaussianMomentum,
            InitialFamily::PoissonKernel => Family::PoissonKernel,
            InitialFamily::SmoothBump => Family::SmoothBump,
            InitialFamily::SingleMode => Family::SingleMode,
            InitialFamily::File => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub family: InitialFamily,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub width: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "plus")]
    pub sign: i8,
    #[serde(default = "mode")]
    pub mode: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}
fn plus() -> i8 {
    1
}
fn mode() -> u32 {
    1
}

impl InitialSection {
    pub fn family(family: InitialFamily) -> Self {
        Self {
            family,
            amplitude: 1.0,
            width: 1.0,
            center: 0.0,
            sign: 1,
            mode: 1,
            path: None,
        }
    }

    pub fn params(&self) -> FamilyParams {
        FamilyParams {
            amplitude: self.amplitude,
            width: self.width,
            center: self.center,
            sign: self.sign,
            mode: self.mode,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChecksSection {
    pub claims: Vec<String>,
    pub transport_tolerance: f64,
    /// `sigma0 < 0` for the radius bound.
    pub radius_sigma0: f64,
    pub max_j: usize,
    /// Strip parameters and `m` for the lifespan claim.
    pub lifespan_sigma0: f64,
    pub lifespan_sigma: f64,
    pub lifespan_m: usize,
}

impl Default for ChecksSection {
    fn default() -> Self {
        Self {
            claims: Vec::new(),
            transport_tolerance: zeroeq::harness::tolerances::TRANSPORT_RESIDUAL,
            radius_sigma0: -0.5,
            max_j: NormTruncation::default().max_j,
            lifespan_sigma0: 1.0,
            lifespan_sigma: 0.5,
            lifespan_m: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsSection {
    pub c_m: f64,
    pub c_s: f64,
}

impl Default for ConstantsSection {
    fn default() -> Self {
        Self { c_m: 1.0, c_s: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub plots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: PathBuf::from("out"), plots: true }
    }
}

/// One schema or validation problem, located by its dotted key path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl ConfigErrors {
    pub fn mentions(&self, path: &str) -> bool {
        self.0.iter().any(|e| e.path == path)
    }
}

/// Parses and validates a TOML document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let de = toml::Deserializer::parse(text).map_err(|e| {
        ConfigErrors(vec![ConfigError { path: "<document>".into(), message: e.message().to_string() }])
    })?;
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<document>".to_string() } else { path };
        ConfigErrors(vec![ConfigError { path, message: e.into_inner().message().to_string() }])
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn new(initial: InitialSection) -> Self {
        Self {
            model: ModelSection::default(),
            grid: GridSection::default(),
            solver: SolverSection::default(),
            initial,
            diagnostics: DiagnosticsSpec::default(),
            checks: ChecksSection::default(),
            constants: ConstantsSection::default(),
            output: OutputSection::default(),
        }
    }

    /// Semantic checks the schema cannot express. Reports every problem found.
    pub fn validate(&self) -> Result<(), ConfigErrors> {
        let mut errs = Vec::new();
        let mut bad = |path: &str, message: String| errs.push(ConfigError { path: path.into(), message });
        let pos = |x: f64| x > 0.0 && x.is_finite();

        if self.model.k == 0 {
            bad("model.k", "must be >= 1".into());
        }
        if !pos(self.grid.half_length) {
            bad("grid.half_length", format!("must be positive, got {}", self.grid.half_length));
        }
        let n = self.grid.n_points;
        if n % 2 != 0 || n < 16 {
            bad("grid.n_points", format!("must be even and >= 16, got {n}"));
        }
        let s = &self.solver;
        if !pos(s.dt) {
            bad("solver.dt", format!("must be positive, got {}", s.dt));
        }
        if !(s.t_end >= 0.0 && s.t_end.is_finite()) {
            bad("solver.t_end", format!("must be finite and >= 0, got {}", s.t_end));
        }
        if !(s.dealias_fraction > 0.0 && s.dealias_fraction <= 1.0) {
            bad("solver.dealias_fraction", format!("must lie in (0, 1], got {}", s.dealias_fraction));
        }
        if s.snapshot_stride == 0 {
            bad("solver.snapshot_stride", "must be >= 1".into());
        }
        if !(s.blowup_factor > 1.0) {
            bad("solver.blowup_factor", format!("must exceed 1, got {}", s.blowup_factor));
        }
        let init = &self.initial;
        if let Err(e) = init.params().validate() {
            bad("initial", e.to_string());
        }
        match (init.family, &init.path) {
            (InitialFamily::File, None) => bad("initial.path", "required when family = \"file\"".into()),
            (f, Some(_)) if f != InitialFamily::File => {
                bad("initial.path", "only allowed when family = \"file\"".into())
            }
            _ => {}
        }
        for (i, &sv) in self.diagnostics.sobolev.iter().enumerate() {
            if !sv.is_finite() {
                bad(&format!("diagnostics.sobolev[{i}]"), "must be finite".into());
            }
        }
        for (i, km) in self.diagnostics.kato_masuda.iter().enumerate() {
            let KatoMasudaSpec { sigma, s, max_j } = *km;
            if !(sigma.is_finite() && s.is_finite()) {
                bad(&format!("diagnostics.kato_masuda[{i}]"), "sigma and s must be finite".into());
            }
            if max_j > zeroeq::spectral::DEFAULT_MAX_DERIVATIVE {
                bad(
                    &format!("diagnostics.kato_masuda[{i}].max_j"),
                    format!("exceeds the derivative cap {}", zeroeq::spectral::DEFAULT_MAX_DERIVATIVE),
                );
            }
        }
        if !(self.diagnostics.support_eps >= 0.0 && self.diagnostics.support_eps < 1.0) {
            bad("diagnostics.support_eps", "must lie in [0, 1)".into());
        }
        let c = &self.checks;
        let mut seen = BTreeSet::new();
        for (i, claim) in c.claims.iter().enumerate() {
            if !CLAIM_IDS.contains(&claim.as_str()) && !EXTRA_CLAIMS.contains(&claim.as_str()) {
                bad(&format!("checks.claims[{i}]"), format!("unknown claim id {claim:?}"));
            }
            if !seen.insert(claim) {
                bad(&format!("checks.claims[{i}]"), format!("duplicate claim id {claim:?}"));
            }
        }
        if !pos(c.transport_tolerance) {
            bad("checks.transport_tolerance", "must be positive".into());
        }
        if !(c.radius_sigma0 < 0.0) {
            bad("checks.radius_sigma0", format!("must be negative, got {}", c.radius_sigma0));
        }
        if c.max_j > zeroeq::spectral::DEFAULT_MAX_DERIVATIVE {
            bad("checks.max_j", format!("exceeds the derivative cap {}", zeroeq::spectral::DEFAULT_MAX_DERIVATIVE));
        }
        if !(c.lifespan_sigma0 > 0.0 && c.lifespan_sigma0 <= 1.0) {
            bad("checks.lifespan_sigma0", format!("must lie in (0, 1], got {}", c.lifespan_sigma0));
        }
        if !(c.lifespan_sigma > 0.0 && c.lifespan_sigma < c.lifespan_sigma0) {
            bad(
                "checks.lifespan_sigma",
                format!("must satisfy 0 < sigma < sigma0 = {}, got {}", c.lifespan_sigma0, c.lifespan_sigma),
            );
        }
        if c.lifespan_m < 3 || 2 * c.lifespan_m > zeroeq::spectral::DEFAULT_MAX_DERIVATIVE {
            bad("checks.lifespan_m", format!("must lie in 3..=6, got {}", c.lifespan_m));
        }
        if !pos(self.constants.c_m) {
            bad("constants.c_m", "must be positive".into());
        }
        if !pos(self.constants.c_s) {
            bad("constants.c_s", "must be positive".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigErrors(errs))
        }
    }

    /// The fully resolved document, every default written out.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Names accepted by [`preset`].
pub const PRESETS: &[&str] = &[
    "zero",
    "conservation_k1",
    "theorem12_k1",
    "theorem12_k2",
    "theorem12_k3",
    "lemma52",
    "i_identity",
    "support_spreading",
    "radius_k1",
    "lifespan_table",
];

fn claims(ids: &[&str]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

/// Reference experiments, one per checked claim.
pub fn preset(name: &str) -> Option<RunConfig> {
    let mut cfg = RunConfig::new(InitialSection::family(InitialFamily::GaussianMomentum));
    cfg.output.directory = PathBuf::from(format!("out/{name}"));
    match name {
        "zero" => {
            cfg.initial = InitialSection { amplitude: 0.0, ..InitialSection::family(InitialFamily::GaussianU) };
            cfg.grid.n_points = 128;
            cfg.solver.dt = 1e-2;
            cfg.solver.t_end = 0.1;
            cfg.solver.snapshot_stride = 1;
            cfg.checks.claims = claims(CLAIM_IDS);
        }
        "conservation_k1" => {
            cfg.solver.t_end = 2.0;
            cfg.solver.snapshot_stride = 20;
            cfg.checks.claims = claims(&["mean_conservation", "l1_conservation"]);
        }
        "theorem12_k1" | "theorem12_k2" | "theorem12_k3" => {
            cfg.model.k = name[name.len() - 1..].parse().expect("digit");
            cfg.solver.snapshot_stride = 1;
            cfg.checks.claims = claims(&["sign_invariance", "transport"]);
        }
        "lemma52" => {
            cfg.solver.t_end = 2.0;
            cfg.solver.snapshot_stride = 20;
            cfg.checks.claims = claims(&["slope_bound", "h3_growth", "energy_estimate"]);
        }
        "i_identity" => {
            cfg.solver.snapshot_stride = 20;
            cfg.checks.claims = claims(&["i_functional_identity"]);
        }
        "support_spreading" => {
            cfg.initial = InitialSection::family(InitialFamily::SmoothBump);
            cfg.solver.t_end = 0.1;
            cfg.solver.snapshot_stride = 1;
            cfg.checks.claims = claims(&["support_spreading"]);
        }
        "radius_k1" => {
            cfg.initial = InitialSection::family(InitialFamily::PoissonKernel);
            cfg.solver.t_end = 0.05;
            cfg.solver.snapshot_stride = 5;
            cfg.checks.claims = claims(&["radius_bound"]);
            cfg.diagnostics.kato_masuda = vec![KatoMasudaSpec { sigma: -0.5, s: 2.0, max_j: 10 }];
        }
        "lifespan_table" => {
            cfg.solver.t_end = 0.0;
            cfg.checks.claims = claims(&["lifespan_constant", "lifespan"]);
        }
        _ => return None,
    }
    Some(cfg)
}
