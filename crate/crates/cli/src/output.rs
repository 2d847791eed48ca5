use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::commands::Failure;
use crate::exit;

pub const THREADS_VAR: &str = "TWIST_ORBIT_THREADS";

/// Caps the global rayon pool from `TWIST_ORBIT_THREADS`.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Provenance of one run. Everything except `wall_time_s` is a function of
/// the inputs, so equal manifests reproduce equal output files.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub model: Value,
    pub options: Value,
    pub seed: u64,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

/// Collects output files for one run and writes them with the manifest.
pub struct Output {
    dir: Option<PathBuf>,
    files: Vec<(String, Vec<u8>)>,
    started: Instant,
}

impl Output {
    pub fn new(dir: Option<&Path>) -> Self {
        Output {
            dir: dir.map(Path::to_path_buf),
            files: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn add(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), bytes.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("results serialize");
        text.push('\n');
        self.add(name, text);
    }

    pub fn finish(
        self,
        command: &str,
        model: Value,
        options: Value,
        seed: u64,
    ) -> Result<(), Failure> {
        let Some(dir) = self.dir else {
            return Ok(());
        };
        let io = |e: std::io::Error| Failure::new(exit::INPUT, format!("{}: {e}", dir.display()));
        fs::create_dir_all(&dir).map_err(io)?;
        for (name, bytes) in &self.files {
            fs::write(dir.join(name), bytes).map_err(io)?;
        }
        let manifest = RunManifest {
            command: command.to_string(),
            model,
            options,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: self.files.iter().map(|(n, _)| n.clone()).collect(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        fs::write(dir.join("manifest.json"), text).map_err(io)?;
        Ok(())
    }
}
