//! Run configuration: defaults, then a `key=value` file, then flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv|json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub workers: usize,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output_dir: None,
            format: Format::Csv,
            seed: 0,
        }
    }
}

/// Flag-level overrides; `None` leaves the lower layer in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(CliError::Usage(format!("tol must be positive, got {}", self.tol)));
        }
        if self.workers == 0 {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn overlay(mut self, o: &Overrides) -> Self {
        if let Some(t) = o.tol {
            self.tol = t;
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
        if let Some(d) = &o.output_dir {
            self.output_dir = Some(d.clone());
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| CliError::Config {
        line,
        message: format!("bad value for `{key}`: {e}"),
    })
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Overrides, CliError> {
    let mut o = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(CliError::Config { line, message: format!("expected key=value, got `{content}`") });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "tol" => o.tol = Some(parse_value(key, value, line)?),
            "workers" => o.workers = Some(parse_value(key, value, line)?),
            "output_dir" => o.output_dir = Some(PathBuf::from(value)),
            "format" => o.format = Some(parse_value(key, value, line)?),
            "seed" => o.seed = Some(parse_value(key, value, line)?),
            other => {
                return Err(CliError::Config { line, message: format!("unknown key `{other}`") });
            }
        }
    }
    Ok(o)
}

/// Defaults overlaid by the file at `path`.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let config = RunConfig::default().overlay(&parse_config(&text)?);
    config.validate()?;
    Ok(config)
}
