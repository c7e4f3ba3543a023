use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "dirspec";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub config_hash: String,
}

impl Manifest {
    pub fn new(command: &str, config: Value) -> Self {
        let canon = serde_json::to_string(&config).expect("config serializes");
        let config_hash = hex::encode(Sha256::digest(canon.as_bytes()));
        Manifest { tool: TOOL, version: VERSION, command: command.to_string(), config, config_hash }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}

pub fn envelope(man: &Manifest, result: &impl Serialize) -> Value {
    json!({ "manifest": man.to_value(), "result": result })
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// `<file>.manifest.json` next to a CSV report.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn write_csv(path: &Path, man: &Manifest, header: &[&str], rows: &[Vec<String>]) -> Result<(), String> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| e.to_string())?;
        }
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| e.to_string())?;
    w.write_record(header).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(r).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;
    write_text(&sidecar(path), &pretty(&man.to_value())).map_err(|e| e.to_string())
}

/// Report destination: stdout when `None`.
pub fn emit_json(report: Option<&Path>, v: &Value) -> Result<(), String> {
    match report {
        None => {
            print!("{}", pretty(v));
            Ok(())
        }
        Some(p) => write_text(p, &pretty(v)).map_err(|e| e.to_string()),
    }
}

pub fn is_csv(p: &Path) -> bool {
    p.extension().map(|e| e.eq_ignore_ascii_case("csv")).unwrap_or(false)
}
