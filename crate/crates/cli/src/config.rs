//! Declarative tool configuration with CLI overrides and a provenance
//! hash embedded in every report.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use posterqa_core::reward::RewardConfig;

fn default_k_values() -> Vec<f64> {
    vec![0.5, 1.0]
}
fn default_threshold() -> f64 {
    3.0
}
fn default_bins() -> usize {
    8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RemainderPolicy {
    /// Keep the literal floor quotas; the subset may be smaller than K.
    #[default]
    Floor,
    /// Top up to exactly K from the globally largest remaining errors.
    Fill,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToolConfig {
    pub reward: RewardConfig,
    /// Absolute-error thresholds reported as Acc@k.
    pub k_values: Vec<f64>,
    /// Weakest-link flagging threshold (strict less-than).
    pub weakest_link_threshold: f64,
    /// Histogram bin count for dataset statistics.
    pub bins: usize,
    /// Optional path to a tag-taxonomy JSON; tags validate only when set.
    pub tag_taxonomy: Option<String>,
    pub remainder_policy: RemainderPolicy,
    pub format: OutputFormat,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            reward: RewardConfig::default(),
            k_values: default_k_values(),
            weakest_link_threshold: default_threshold(),
            bins: default_bins(),
            tag_taxonomy: None,
            remainder_policy: RemainderPolicy::Floor,
            format: OutputFormat::Json,
        }
    }
}

impl ToolConfig {
    /// Loads JSON or TOML depending on the file extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: ToolConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text)?,
            _ => serde_json::from_str(&text)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.reward
            .validate()
            .map_err(|e| anyhow::anyhow!(e.to_string()))?;
        if self.k_values.is_empty() || self.k_values.iter().any(|&k| !(k > 0.0)) {
            bail!("k_values must be non-empty and positive");
        }
        if !(self.weakest_link_threshold > 1.0 && self.weakest_link_threshold < 5.0) {
            bail!("weakest_link_threshold must be in (1, 5)");
        }
        if self.bins == 0 {
            bail!("bins must be at least 1");
        }
        Ok(())
    }

    /// Hash of the effective config; changes iff any field changes.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// SHA-256 of a file, for input provenance in reports.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read input {}", path.display()))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}
