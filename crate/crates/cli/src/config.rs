//! Optional JSON defaults. Any field left out falls back to the built-in
//! default; any flag given on the command line wins over the file.

use std::path::Path;

use anyhow::Context;
use dsfft::pipeline::CostWeights;
use serde::Deserialize;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub width: Option<u32>,
    pub frac: Option<u32>,
    pub p: Option<u32>,
    pub b: Option<u32>,
    pub algorithm: Option<u8>,
    pub n: Option<usize>,
    pub implementation: Option<String>,
    pub scaling: Option<String>,
    pub rounding: Option<String>,
    pub overflow: Option<String>,
    pub twiddle: Option<usize>,
    pub depth: Option<usize>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub constants: Option<u64>,
    pub weights: Option<CostWeights>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flag, then config, then default.
pub fn pick<T: Clone>(flag: Option<T>, config: &Option<T>, default: T) -> T {
    flag.or_else(|| config.clone()).unwrap_or(default)
}
