//! Provenance written next to every command's outputs.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub argv: Vec<String>,
    /// Every option after defaults and environment fallbacks were applied.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

pub fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

impl RunRecord {
    pub fn new(command: &str, argv: &[String], config: serde_json::Value, seed: Option<u64>, started_unix_ms: u128) -> Self {
        RunRecord {
            command: command.to_string(),
            argv: argv.to_vec(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
            started_unix_ms,
            finished_unix_ms: started_unix_ms,
        }
    }

    /// Stamps the finish time and writes the record as pretty JSON.
    pub fn finish(mut self, path: &Path) -> Result<()> {
        self.finished_unix_ms = now_ms();
        let mut text = serde_json::to_string_pretty(&self).expect("record serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Stamps the finish time and writes the record as one JSON line to stderr.
    pub fn finish_to_stderr(mut self) {
        self.finished_unix_ms = now_ms();
        eprintln!("{}", serde_json::to_string(&self).expect("record serializes"));
    }
}
