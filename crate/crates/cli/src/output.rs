//! Text artifacts: diagnostics CSV, field CSV, JSON reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use zeroeq::harness::{DiagnosticRecord, DiagnosticsSeries};
use zeroeq::spectral::{Field, Grid};

use crate::error::CliError;

/// Fixed-width scientific format with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn label(x: f64) -> String {
    format!("{x}")
}

/// Column names; a pure function of the requested diagnostics.
pub fn csv_header(series: &DiagnosticsSeries) -> Vec<String> {
    let mut cols: Vec<String> = [
        "t", "mean_u", "l1_u", "l1_m", "min_m", "max_m", "max_neg_ux", "h1", "h3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend(series.spec.sobolev.iter().map(|&s| format!("hs_{}", label(s))));
    cols.extend(
        [
            "c1",
            "I_functional",
            "dIdt_residual",
            "support_lo",
            "support_hi",
            "radius_fit",
            "radius_fit_quality",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    cols.extend(
        series
            .spec
            .kato_masuda
            .iter()
            .map(|km| format!("km_sq_{}_{}_{}", label(km.sigma), label(km.s), km.max_j)),
    );
    cols.extend(
        ["min_u", "max_u", "min_neg_ux", "h2", "dIdt_integral", "edge_ratio"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols
}

fn csv_row(r: &DiagnosticRecord) -> Vec<f64> {
    let (lo, hi) = r.support.unwrap_or((f64::NAN, f64::NAN));
    let mut row = vec![r.t, r.mean_u, r.l1_u, r.l1_m, r.min_m, r.max_m, r.max_neg_ux, r.h1, r.h3];
    row.extend(&r.hs);
    row.extend([
        r.c1,
        r.i_functional,
        r.di_dt_residual,
        lo,
        hi,
        r.radius_fit,
        r.radius_fit_quality,
    ]);
    row.extend(&r.km_sq);
    row.extend([r.min_u, r.max_u, r.min_neg_ux, r.h2, r.di_dt_integral, r.edge_ratio]);
    row
}

pub fn diagnostics_csv(series: &DiagnosticsSeries) -> String {
    let mut out = csv_header(series).join(",");
    out.push('\n');
    for r in &series.records {
        let row: Vec<String> = csv_row(r).into_iter().map(num).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn field_csv(f: &Field<f64>) -> String {
    let mut out = String::from("x,u\n");
    let g = f.grid();
    for (i, v) in f.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", num(g.node(i)), num(*v)));
    }
    out
}

/// Reads a `x,u` CSV sampled on a uniform grid starting at `x = -L`.
pub fn read_field(path: &Path) -> Result<Field<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_field(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
}

pub fn parse_field(text: &str) -> Result<Field<f64>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty file")?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["x", "u"] {
        return Err(format!("expected header \"x,u\", got {header:?}"));
    }
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut parts = line.split(',').map(str::trim);
        let mut next = |name: &str| -> Result<f64, String> {
            parts
                .next()
                .ok_or_else(|| format!("line {}: missing {name}", i + 2))?
                .parse::<f64>()
                .map_err(|e| format!("line {}: {name}: {e}", i + 2))
        };
        xs.push(next("x")?);
        us.push(next("u")?);
    }
    let n = xs.len();
    if n < 2 {
        return Err("need at least two samples".into());
    }
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let l = 0.5 * dx * n as f64;
    for (i, &x) in xs.iter().enumerate() {
        if (x - (-l + i as f64 * dx)).abs() > 1e-9 * l.max(1.0) {
            return Err(format!("x values are not a uniform grid starting at -L (row {})", i + 1));
        }
    }
    let grid = Grid::new(l, n).map_err(|e| e.to_string())?;
    Field::new(grid, us).map_err(|e| e.to_string())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Owns one output directory.
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        let mut f = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        f.write_all(contents.as_bytes()).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
