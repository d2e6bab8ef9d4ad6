//! Defaults from an optional TOML config file, overridden by flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Deserialize;
use skyport_core::{AllocationMode, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    PerPair,
    SingleOrigin,
}

impl From<ModeArg> for AllocationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PerPair => AllocationMode::PerPair,
            ModeArg::SingleOrigin => AllocationMode::SinglePerOrigin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Bf,
    Bb,
    Ls,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bf => Method::BruteForce,
            MethodArg::Bb => Method::BranchAndBound,
            MethodArg::Ls => Method::LocalSearch,
        }
    }
}

/// Keys accepted in the config file; every one is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub p: Option<usize>,
    pub mode: Option<ModeArg>,
    pub method: Option<MethodArg>,
    pub keep_zones: Option<usize>,
    pub seed: Option<u64>,
    pub time_limit: Option<f64>,
    pub restarts: Option<usize>,
    pub gap: Option<f64>,
    pub jobs: Option<usize>,
    pub airspeed: Option<f64>,
    pub min_trip_minutes: Option<f64>,
    pub max_trip_minutes: Option<f64>,
    pub servers: Option<u32>,
    pub service_rate: Option<f64>,
    pub wait_minutes: Option<f64>,
    pub load_unload: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        if !path.exists() {
            bail!("config file not found: {}", path.display());
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
