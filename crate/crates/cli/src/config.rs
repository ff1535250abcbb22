//! Optional flat configuration file.
//!
//! The file is TOML with top-level `key = value` pairs only, for example
//!
//! ```toml
//! n = 10
//! ntot_min = 0.1
//! ntot_max = 100.0
//! points = 200
//! spacing = "log"
//! seed = 42
//! ```
//!
//! Values apply to whichever subcommand reads them; command-line flags win
//! over the file, and the file wins over built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub ntot_min: Option<f64>,
    pub ntot_max: Option<f64>,
    pub points: Option<usize>,
    pub spacing: Option<String>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub replications: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub alpha_list: Option<Vec<f64>>,
    pub grid: Option<String>,
    pub family: Option<String>,
    pub probe: Option<String>,
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub pure_tol: Option<f64>,
    pub fd_tol: Option<f64>,
    pub fd_step: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}
