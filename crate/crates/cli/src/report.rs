use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;

/// Fields shared by every report.
#[derive(Debug, Serialize)]
pub struct Header {
    pub command: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub seed: u64,
}

impl Header {
    pub fn new(command: &'static str, config: &RunConfig) -> Self {
        Self { command, version: galqm::VERSION, config_sha256: config.hash(), seed: config.seed }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn write(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
