use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

/// Written next to every output file as `<file>.manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub argv: Vec<String>,
    pub threads: usize,
    /// Seconds since the Unix epoch.
    pub started_at: f64,
    pub finished_at: f64,
    pub outputs: Vec<PathBuf>,
}

pub fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        parameters: impl Serialize,
        seed: Option<u64>,
        argv: Vec<String>,
        started_at: f64,
    ) -> Result<Self> {
        Ok(Self {
            subcommand: subcommand.to_string(),
            parameters: serde_json::to_value(parameters)?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            argv,
            threads: rayon::current_num_threads(),
            started_at,
            finished_at: started_at,
            outputs: Vec::new(),
        })
    }

    /// Stamps the finish time and writes one manifest per output.
    pub fn write_all(mut self) -> Result<()> {
        self.finished_at = now();
        let text = serde_json::to_string_pretty(&self)?;
        for out in &self.outputs {
            let path = manifest_path(out);
            std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}
