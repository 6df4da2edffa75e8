//! Run manifest: the resolved config and provenance of one run, written
//! before the run starts and finalized when it ends.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Config;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub tool_version: String,
    pub git_describe: String,
    pub seed: u64,
    pub threads: usize,
    pub started: String,
    pub finished: Option<String>,
    pub wall_time_s: Option<f64>,
    /// `running`, `ok`, or `failed: <reason>`.
    pub status: String,
    pub output_paths: Vec<String>,
    pub resolved_config: Config,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, config: &Config) -> (Self, Instant) {
        let m = Self {
            command: command.to_string(),
            argv: std::env::args().collect(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            git_describe: env!("RAQR_GIT_DESCRIBE").to_string(),
            seed: config.seed,
            threads: config.threads,
            started: now(),
            finished: None,
            wall_time_s: None,
            status: "running".into(),
            output_paths: Vec::new(),
            resolved_config: config.clone(),
        };
        (m, Instant::now())
    }

    pub fn finish(&mut self, started: Instant, status: String, outputs: Vec<PathBuf>) {
        self.finished = Some(now());
        self.wall_time_s = Some(started.elapsed().as_secs_f64());
        self.status = status;
        self.output_paths = outputs.iter().map(|p| p.display().to_string()).collect();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, self.to_json())?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
