use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Study parameters, loadable from a TOML file and overridable per-field by
/// command-line flags (flags win). Unset fields fall back to per-command
/// defaults documented in the README.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,

    // homeomorphism families
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,

    // matrices and cocycle coefficients (row-major 2x2)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<[f64; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq: Option<f64>,

    // matrix ensembles
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_neg: Option<f64>,

    // study sizes
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fine_div: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
}

macro_rules! override_fields {
    ($base:expr, $top:expr, $($field:ident),+ $(,)?) => {
        $(if $top.$field.is_some() { $base.$field = $top.$field.clone(); })+
    };
}

impl StudyConfig {
    pub fn load(path: &Path) -> Result<StudyConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        StudyConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<StudyConfig> {
        toml::from_str(text).context("parsing config")
    }

    pub fn emit(&self) -> Result<String> {
        toml::to_string(self).context("serializing config")
    }

    /// Overlay `top` (flag values) onto `self` (file values); set fields of
    /// `top` win.
    pub fn merged_with(mut self, top: &StudyConfig) -> StudyConfig {
        override_fields!(
            self, top, seed, workers, out, format, family, angle, omega, k, entries, a, b, kind,
            period, freq, ensemble, lo, hi, p_neg, t, t_grid, n, windows, replicas, dt, bins,
            fine_div, x0, s0,
        );
        self
    }
}
