//! The machine-readable record of one invocation.

use doctrina::report::Report;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub struct RunReport {
    command: Vec<String>,
    inputs: Map<String, Value>,
    flags: Map<String, Value>,
    checks: Vec<Report>,
    details: Map<String, Value>,
    wall_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport { command, inputs: Map::new(), flags: Map::new(), checks: Vec::new(), details: Map::new(), wall_ms: None }
    }

    /// Reads an input file and records its SHA-256.
    pub fn input(&mut self, path: &Path) -> anyhow::Result<Vec<u8>> {
        let bytes = std::fs::read(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(path.display().to_string(), json!(hex));
        Ok(bytes)
    }

    pub fn flag(&mut self, name: &str, v: Value) {
        self.flags.insert(name.into(), v);
    }

    pub fn push(&mut self, r: Report) {
        self.checks.push(r);
    }

    pub fn detail(&mut self, key: &str, v: Value) {
        self.details.insert(key.into(), v);
    }

    pub fn set_wall(&mut self, ms: u128) {
        self.wall_ms = Some(ms);
    }

    pub fn verdict(&self) -> bool {
        self.checks.iter().all(|r| r.pass)
    }

    /// Witnesses of failing checks, in order.
    pub fn witnesses(&self) -> Vec<Value> {
        self.checks.iter().filter(|r| !r.pass).filter_map(|r| r.witness.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "command": self.command,
            "inputs": self.inputs,
            "flags": self.flags,
            "checks": self.checks.iter().map(Report::to_json).collect::<Vec<_>>(),
            "verdict": self.verdict(),
        });
        if !self.details.is_empty() {
            out["details"] = Value::Object(self.details.clone());
        }
        if !self.verdict() {
            out["witnesses"] = json!(self.witnesses());
        }
        if let Some(ms) = self.wall_ms {
            out["wall_ms"] = json!(ms);
        }
        out
    }

    /// Human-readable summary; long details are left to the JSON report.
    pub fn print(&self) {
        let mut out = String::new();
        for r in &self.checks {
            out.push_str(&r.to_string());
        }
        for (k, v) in &self.details {
            let text = v.to_string();
            if text.len() <= 160 {
                out.push_str(&format!("{k}: {text}\n"));
            } else {
                out.push_str(&format!("{k}: (in the JSON report)\n"));
            }
        }
        if let Some(ms) = self.wall_ms {
            out.push_str(&format!("wall time: {ms} ms\n"));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict()));
        let _ = std::io::stdout().lock().write_all(out.as_bytes());
    }
}
