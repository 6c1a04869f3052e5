//! Shared run context: resolved config, artifact paths, and the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use serde::{Deserialize, Serialize};
use stancekit::report::ReportMeta;

use crate::config::RunConfig;
use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything a stage needs: config, config hash, and the manifest.
pub struct Ctx {
    pub config: RunConfig,
    pub config_hash: String,
    pub manifest: Manifest,
}

impl Ctx {
    pub fn new(config: RunConfig) -> Result<Self, CliError> {
        let config_hash = config.hash();
        let manifest = Manifest::load_or_new(&config.out.join("manifest.json"), &config_hash, &config)?;
        Ok(Ctx { config, config_hash, manifest })
    }

    /// Artifact path under the output directory, creating parent dirs.
    pub fn artifact(&self, relative: &str) -> Result<PathBuf, CliError> {
        let path = self.config.out.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        Ok(path)
    }

    /// Path to an artifact another stage must have produced.
    pub fn require(&self, relative: &str, producing_stage: &str) -> Result<PathBuf, CliError> {
        let path = self.config.out.join(relative);
        if !path.exists() {
            return Err(CliError::MissingArtifact {
                stage: producing_stage.to_string(),
                path: path.display().to_string(),
            });
        }
        Ok(path)
    }

    /// Metadata stamped on every report artifact.
    pub fn meta(&self) -> ReportMeta {
        ReportMeta::new()
            .with("tool", format!("stancekit-{TOOL_VERSION}"))
            .with("config", &self.config_hash)
            .with("stance_seed", self.config.stance.seed)
            .with("lda_seed", self.config.lda.seed)
    }

    /// Record a stage's artifacts and persist the manifest.
    pub fn finish_stage(&mut self, stage: &str, artifacts: &[&str]) -> Result<(), CliError> {
        self.manifest
            .stages
            .insert(stage.to_string(), artifacts.iter().map(|s| s.to_string()).collect());
        let path = self.artifact("manifest.json")?;
        self.manifest.save(&path)?;
        Ok(())
    }
}

/// Run manifest: config hash, seeds, and the artifacts each stage wrote.
/// Reruns with the same config reproduce it byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config_hash: String,
    pub seeds: BTreeMap<String, u64>,
    pub stages: BTreeMap<String, Vec<String>>,
}

impl Manifest {
    fn load_or_new(path: &Path, config_hash: &str, config: &RunConfig) -> Result<Self, CliError> {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(existing) = serde_json::from_str::<Manifest>(&text) {
                // Stale manifests from a different config are discarded.
                if existing.config_hash == config_hash && existing.tool_version == TOOL_VERSION {
                    return Ok(existing);
                }
            }
        }
        Ok(Manifest {
            tool_version: TOOL_VERSION.to_string(),
            config_hash: config_hash.to_string(),
            seeds: BTreeMap::from([
                ("stance".to_string(), config.stance.seed),
                ("lda".to_string(), config.lda.seed),
            ]),
            stages: BTreeMap::new(),
        })
    }

    fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).context("serializing manifest")?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
