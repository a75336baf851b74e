use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::io::to_json;

pub const FILE_NAME: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Graph,
    Code,
    Surgery,
    Adapter,
    ToricMerge,
}

/// Record of one CLI run. Artifact paths are relative to the manifest's
/// directory; `summary` is what re-verification must reproduce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub kind: Kind,
    pub tool_version: String,
    pub seed: u64,
    pub parameters: Value,
    pub artifacts: BTreeMap<String, String>,
    pub summary: Value,
}

impl Manifest {
    pub fn new(kind: Kind, seed: u64) -> Self {
        Self {
            kind,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            parameters: Value::Object(Default::default()),
            artifacts: BTreeMap::new(),
            summary: Value::Null,
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let m: Manifest = serde_json::from_str(&text).with_context(|| format!("{}: not a manifest", path.display()))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((m, dir))
    }

    pub fn artifact(&self, dir: &Path, role: &str) -> anyhow::Result<PathBuf> {
        self.artifacts
            .get(role)
            .map(|f| dir.join(f))
            .ok_or_else(|| anyhow!("manifest has no `{role}` artifact"))
    }

    pub fn expect_kind(&self, kinds: &[Kind]) -> anyhow::Result<()> {
        if !kinds.contains(&self.kind) {
            bail!("manifest kind {:?} not accepted here (expected one of {kinds:?})", self.kind);
        }
        Ok(())
    }

    pub fn param(&self, key: &str) -> anyhow::Result<&Value> {
        self.parameters
            .get(key)
            .ok_or_else(|| anyhow!("manifest parameters lack `{key}`"))
    }
}

/// Collects artifacts for one output directory.
pub struct OutputDir {
    dir: PathBuf,
    pub manifest: Manifest,
}

impl OutputDir {
    pub fn create(dir: &Path, kind: Kind, seed: u64) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: Manifest::new(kind, seed),
        })
    }

    /// Writes `file` and records it under `role`.
    pub fn write(&mut self, role: &str, file: &str, contents: &str) -> anyhow::Result<()> {
        let path = self.dir.join(file);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.manifest.artifacts.insert(role.to_string(), file.to_string());
        Ok(())
    }

    pub fn finish(self) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(FILE_NAME);
        fs::write(&path, to_json(&self.manifest)).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}
