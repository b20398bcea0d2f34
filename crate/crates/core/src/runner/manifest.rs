//! The run manifest: what ran, what it wrote, and which checks passed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// One pass/fail check with the number it was decided on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    /// `None` when the check is not numeric (or the value is not finite).
    pub value: Option<f64>,
    pub tolerance: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl Assertion {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Assertion { name: name.into(), passed: value <= limit, value: finite(value), tolerance: format!("<= {limit:e}"), detail: String::new() }
    }

    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Assertion { name: name.into(), passed: value >= limit, value: finite(value), tolerance: format!(">= {limit}"), detail: String::new() }
    }

    pub fn within(name: &str, value: f64, range: [f64; 2]) -> Self {
        Assertion {
            name: name.into(),
            passed: value >= range[0] && value <= range[1],
            value: finite(value),
            tolerance: format!("in [{}, {}]", range[0], range[1]),
            detail: String::new(),
        }
    }

    pub fn check(name: &str, passed: bool, tolerance: &str) -> Self {
        Assertion { name: name.into(), passed, value: None, tolerance: tolerance.into(), detail: String::new() }
    }

    /// Passes without a measurement, e.g. a drift ratio on zero data.
    pub fn trivial(name: &str, why: &str) -> Self {
        Assertion { name: name.into(), passed: true, value: None, tolerance: "trivial".into(), detail: why.into() }
    }

    pub fn failed(name: &str, detail: String) -> Self {
        Assertion { name: name.into(), passed: false, value: None, tolerance: "completes".into(), detail }
    }
}

/// Every field defaults, so `{}` reads as an empty manifest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunManifest {
    pub scenario: String,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub deterministic: bool,
    pub started: String,
    pub finished: String,
    /// Files written by the run, relative to the output directory.
    pub files: Vec<String>,
    pub assertions: Vec<Assertion>,
    pub extras: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

/// Writes `bytes` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::arg(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_manifest(dir: &Path, m: &RunManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(m)?;
    text.push('\n');
    write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
