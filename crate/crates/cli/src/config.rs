//! TOML config file; every key is optional and mirrors a flag.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::VariantArg;
use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dataset: Option<String>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub variant: Option<VariantArg>,
    pub dims: Option<usize>,
    pub levels: Option<usize>,
    pub epochs: Option<usize>,
    pub repeats: Option<usize>,
    pub train_fraction: Option<f64>,
    pub timings: Option<bool>,
    #[serde(default)]
    pub design: Option<StringOrList>,
    pub cost_table: Option<PathBuf>,
    #[serde(default)]
    pub shape: Option<StringOrList>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum StringOrList {
    One(String),
    Many(Vec<String>),
}

impl StringOrList {
    pub fn into_vec(self) -> Vec<String> {
        match self {
            StringOrList::One(s) => vec![s],
            StringOrList::Many(v) => v,
        }
    }
}

pub fn load(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
