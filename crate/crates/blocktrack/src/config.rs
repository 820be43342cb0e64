//! Optional TOML defaults for command-line flags.
//!
//! Keys mirror the long flag names with `-` replaced by `_`. A flag given on
//! the command line always wins over the file.
//!
//! ```toml
//! lambda = 1.2
//! min_overlap = 31
//! window = "jja"
//! epsilon_grid = "0:0.5:0.05"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub lambda: Option<f64>,
    pub min_overlap: Option<f64>,
    pub min_days: Option<usize>,
    pub connectivity: Option<String>,
    pub window: Option<String>,
    pub epsilon_grid: Option<String>,
    pub harmonics: Option<usize>,
    pub floor: Option<f64>,
    pub detrend: Option<bool>,
    pub lambda_grid: Option<String>,
    pub c_grid: Option<String>,
    pub folds: Option<usize>,
    pub objective: Option<String>,
    pub sigma: Option<f64>,
    pub min_overlap_cells: Option<usize>,
    pub latitude_rescale: Option<bool>,
    pub calendar: Option<String>,
    pub ensemble: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Flag value, else config value parsed with `parse`, else `default`.
pub fn resolve<T, E: std::fmt::Display>(
    flag: Option<T>,
    file: Option<&str>,
    key: &str,
    parse: impl Fn(&str) -> std::result::Result<T, E>,
    default: impl FnOnce() -> T,
) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file {
        Some(s) => parse(s).map_err(|e| Error::Config(format!("{key}: {e}"))),
        None => Ok(default()),
    }
}
