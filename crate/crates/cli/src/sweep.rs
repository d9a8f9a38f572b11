//! `--set key=value` overrides and cartesian parameter sweeps.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{parse_config, ConfigError, ConfigErrors, RunConfig};
use crate::error::{exit, CliError};
use crate::output::{to_json, OutputDir};
use crate::run::run_experiment;

/// Parses `raw` as a TOML value, falling back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn split_assignment(s: &str) -> Result<(&str, &str), CliError> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| CliError::Usage(format!("expected key=value, got {s:?}")))
}

fn set_path(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), ConfigErrors> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = table;
    for part in &parts[..parts.len() - 1] {
        let entry = cur.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| {
            ConfigErrors(vec![ConfigError { path: key.into(), message: format!("{part} is not a table") }])
        })?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Applies dotted-key overrides and re-validates through the schema.
pub fn apply_overrides(cfg: &RunConfig, sets: &[(String, toml::Value)]) -> Result<RunConfig, ConfigErrors> {
    if sets.is_empty() {
        return Ok(cfg.clone());
    }
    let mut table = toml::Table::try_from(cfg).expect("config serializes");
    for (k, v) in sets {
        set_path(&mut table, k, v.clone())?;
    }
    parse_config(&toml::to_string(&table).expect("table serializes"))
}

pub fn parse_sets(raw: &[String]) -> Result<Vec<(String, toml::Value)>, CliError> {
    raw.iter()
        .map(|s| split_assignment(s).map(|(k, v)| (k.to_string(), parse_value(v))))
        .collect()
}

#[derive(Clone, Debug)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<toml::Value>,
}

/// `key=v1,v2,...`.
pub fn parse_axis(s: &str) -> Result<SweepAxis, CliError> {
    let (key, vals) = split_assignment(s)?;
    let values: Vec<toml::Value> = vals.split(',').map(|v| parse_value(v.trim())).collect();
    if values.is_empty() {
        return Err(CliError::Usage(format!("sweep axis {key} has no values")));
    }
    Ok(SweepAxis { key: key.to_string(), values })
}

/// Cartesian product, last axis varying fastest.
pub fn grid_points(axes: &[SweepAxis]) -> Vec<Vec<(String, toml::Value)>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((axis.key.clone(), v.clone()));
                    q
                })
            })
            .collect();
    }
    points
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub index: usize,
    pub directory: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub exit_code: u8,
    pub verdicts: serde_json::Map<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs every point of the sweep, at most `jobs` at a time, one
/// subdirectory per point, and writes `index.json`. Returns the entries
/// and the largest exit code.
pub fn sweep(
    base: &RunConfig,
    axes: &[SweepAxis],
    out: &Path,
    jobs: usize,
    checks: bool,
) -> Result<(Vec<SweepEntry>, u8), CliError> {
    let points = grid_points(axes);
    let configs = points
        .iter()
        .map(|p| apply_overrides(base, p))
        .collect::<Result<Vec<_>, _>>()?;
    let dir = OutputDir::create(out)?;
    let width = points.len().saturating_sub(1).to_string().len().max(3);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let entries: Vec<SweepEntry> = pool.install(|| {
        configs
            .par_iter()
            .zip(&points)
            .enumerate()
            .map(|(i, (cfg, point))| {
                let name = format!("point_{i:0width$}");
                let parameters = point
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::to_value(v).unwrap_or(serde_json::Value::Null)))
                    .collect();
                let mut entry = SweepEntry {
                    index: i,
                    directory: name.clone(),
                    parameters,
                    exit_code: exit::OK,
                    verdicts: serde_json::Map::new(),
                    error: None,
                };
                match run_experiment(cfg, &out.join(&name), checks) {
                    Ok(o) => {
                        entry.exit_code = o.exit_code;
                        for r in &o.reports {
                            let key = match r.parameters.get("k") {
                                Some(k) if r.claim_id == "lifespan_constant" => format!("{}_k{}", r.claim_id, k),
                                _ => r.claim_id.clone(),
                            };
                            entry.verdicts.insert(key, serde_json::to_value(r.verdict).expect("verdict"));
                        }
                    }
                    Err(e) => {
                        entry.exit_code = e.exit_code();
                        entry.error = Some(e.to_string());
                    }
                }
                entry
            })
            .collect()
    });
    dir.write("index.json", &to_json(&entries))?;
    let code = entries.iter().map(|e| e.exit_code).max().unwrap_or(exit::OK);
    Ok((entries, code))
}
