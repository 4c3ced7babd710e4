//! Run configuration: flat `key = value` text.
//!
//! ```text
//! target_mesh = stator.mesh
//! source_mesh = machine.mesh
//! source_field = machine.field     # or: source_analytic = <recipe>
//! time_start = 0
//! time_stop = 1
//! time_count = 73                  # or: times = 0 0.5 1
//! probe = 1 0
//! probe = 0 1
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use stgp::fields::{AnalyticField, OutsidePolicy};
use stgp::solver::{Preconditioner, SolverConfig};
use stgp::Point;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}line {line}: {message}", .file.as_ref().map(|f| format!("{}: ", f.display())).unwrap_or_default())]
pub struct ConfigError {
    pub file: Option<PathBuf>,
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Discrete { mesh: PathBuf, field: PathBuf },
    Analytic(AnalyticField),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeSpec {
    List(Vec<f64>),
    Uniform { start: f64, stop: f64, count: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub target_mesh: PathBuf,
    pub source: SourceSpec,
    pub times: TimeSpec,
    pub space_order: usize,
    pub time_order: usize,
    pub solver: SolverConfig,
    pub outside: OutsidePolicy,
    pub allow_unconverged: bool,
    pub warm_start: Option<PathBuf>,
    pub threads: Option<usize>,
    pub probes: Vec<Point>,
    pub probe_samples: usize,
    pub output_field: PathBuf,
    pub output_report: PathBuf,
    /// Probe `k` is written to `<prefix><k>.csv`.
    pub output_probes: PathBuf,
    pub dump_matrices: Option<PathBuf>,
    /// Key-value pairs as given, for the report.
    pub echo: Vec<(String, String)>,
}

const KEYS: &[&str] = &[
    "target_mesh",
    "source_mesh",
    "source_field",
    "source_analytic",
    "times",
    "time_start",
    "time_stop",
    "time_count",
    "space_order",
    "time_order",
    "tolerance",
    "max_iterations",
    "preconditioner",
    "outside",
    "allow_unconverged",
    "warm_start",
    "threads",
    "probe",
    "probe_samples",
    "output_field",
    "output_report",
    "output_probes",
    "dump_matrices",
];

impl RunConfig {
    /// Parses config text. `base` is the directory relative paths refer to;
    /// `stem` names the default outputs.
    pub fn parse(text: &str, base: &Path, stem: &str) -> Result<RunConfig, ConfigError> {
        let mut values: BTreeMap<&str, (usize, String)> = BTreeMap::new();
        let mut probes = Vec::new();
        let mut echo = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| error(line, format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(error(line, format!("unknown key `{key}`")));
            };
            if value.is_empty() {
                return Err(error(line, format!("`{key}` has no value")));
            }
            echo.push((key.to_string(), value.to_string()));
            if known == "probe" {
                probes.push(parse_point(line, value)?);
            } else if values.insert(known, (line, value.to_string())).is_some() {
                return Err(error(line, format!("`{key}` given more than once")));
            }
        }

        let get = |key: &str| values.get(key).map(|(l, v)| (*l, v.as_str()));
        let path = |key: &str| get(key).map(|(_, v)| base.join(v));
        let number = |key: &str| -> Result<Option<f64>, ConfigError> {
            get(key).map(|(l, v)| parse_value::<f64>(l, key, v)).transpose()
        };
        let integer = |key: &str| -> Result<Option<usize>, ConfigError> {
            get(key).map(|(l, v)| parse_value::<usize>(l, key, v)).transpose()
        };

        let target_mesh = path("target_mesh").ok_or_else(|| error(0, "missing `target_mesh`"))?;
        let source = match (get("source_analytic"), get("source_mesh"), get("source_field")) {
            (Some((line, recipe)), None, None) => SourceSpec::Analytic(
                recipe.parse().map_err(|e| error(line, format!("bad `source_analytic`: {e}")))?,
            ),
            (None, Some(_), Some(_)) => SourceSpec::Discrete {
                mesh: path("source_mesh").unwrap(),
                field: path("source_field").unwrap(),
            },
            (None, Some((line, _)), None) | (None, None, Some((line, _))) => {
                return Err(error(line, "a discrete source needs both `source_mesh` and `source_field`"))
            }
            (None, None, None) => {
                return Err(error(0, "no source: give `source_analytic` or `source_mesh` + `source_field`"))
            }
            (Some((line, _)), _, _) => {
                return Err(error(line, "give either an analytic or a discrete source, not both"))
            }
        };

        let uniform = [get("time_start"), get("time_stop"), get("time_count")];
        let times = match (get("times"), uniform.iter().find_map(|u| *u)) {
            (Some((line, list)), None) => TimeSpec::List(
                list.split_whitespace()
                    .map(|t| parse_value::<f64>(line, "times", t))
                    .collect::<Result<_, _>>()?,
            ),
            (None, Some(_)) => match (number("time_start")?, number("time_stop")?, integer("time_count")?) {
                (Some(start), Some(stop), Some(count)) => TimeSpec::Uniform { start, stop, count },
                _ => return Err(error(0, "`time_start`, `time_stop` and `time_count` must be given together")),
            },
            (Some((line, _)), Some(_)) => {
                return Err(error(line, "give either `times` or `time_start`/`time_stop`/`time_count`, not both"))
            }
            (None, None) => return Err(error(0, "no time grid: give `times` or `time_start`/`time_stop`/`time_count`")),
        };

        let mut solver = SolverConfig::default();
        if let Some(tol) = number("tolerance")? {
            solver.tolerance = tol;
        }
        solver.max_iterations = integer("max_iterations")?;
        if let Some((line, v)) = get("preconditioner") {
            solver.preconditioner = parse_value::<Preconditioner>(line, "preconditioner", v)?;
        }
        if let Err(e) = solver.validate() {
            let line = get("tolerance").or(get("max_iterations")).map_or(0, |(l, _)| l);
            return Err(error(line, e.to_string()));
        }
        let outside = match get("outside") {
            Some((line, v)) => parse_value::<OutsidePolicy>(line, "outside", v)?,
            None => OutsidePolicy::default(),
        };
        let allow_unconverged = match get("allow_unconverged") {
            Some((line, v)) => parse_value::<bool>(line, "allow_unconverged", v)?,
            None => false,
        };
        let threads = integer("threads")?;
        if threads == Some(0) {
            return Err(error(get("threads").unwrap().0, "`threads` must be at least 1"));
        }
        let probe_samples = integer("probe_samples")?.unwrap_or(201);
        if probe_samples < 2 {
            return Err(error(get("probe_samples").unwrap().0, "`probe_samples` must be at least 2"));
        }

        Ok(RunConfig {
            target_mesh,
            source,
            times,
            space_order: integer("space_order")?.unwrap_or(4),
            time_order: integer("time_order")?.unwrap_or(3),
            solver,
            outside,
            allow_unconverged,
            warm_start: path("warm_start"),
            threads,
            probes,
            probe_samples,
            output_field: path("output_field").unwrap_or_else(|| base.join(format!("{stem}.field"))),
            output_report: path("output_report").unwrap_or_else(|| base.join(format!("{stem}.report"))),
            output_probes: path("output_probes").unwrap_or_else(|| base.join(format!("{stem}.probe"))),
            dump_matrices: path("dump_matrices"),
            echo,
        })
    }

    /// Input files named by the config.
    pub fn input_files(&self) -> Vec<&Path> {
        let mut files = vec![self.target_mesh.as_path()];
        if let SourceSpec::Discrete { mesh, field } = &self.source {
            files.push(mesh);
            files.push(field);
        }
        if let Some(w) = &self.warm_start {
            files.push(w);
        }
        files
    }
}

fn error(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        file: None,
        line,
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| error(line, format!("bad value `{value}` for `{key}`: {e}")))
}

fn parse_point(line: usize, value: &str) -> Result<Point, ConfigError> {
    let coords: Vec<f64> = value
        .split_whitespace()
        .map(|c| parse_value::<f64>(line, "probe", c))
        .collect::<Result<_, _>>()?;
    match coords[..] {
        [x, y] => Ok([x, y, 0.0]),
        [x, y, z] => Ok([x, y, z]),
        _ => Err(error(line, format!("a probe needs 2 or 3 coordinates, got {}", coords.len()))),
    }
}
