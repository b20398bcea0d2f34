//! Config in, scenario run, CSV tables and a manifest out.
//!
//! A run never aborts on a scenario error: the error becomes a failed
//! assertion in the manifest, which is always written, and written last.

pub mod config;
pub mod manifest;
pub mod report;
pub mod scenarios;

use std::path::Path;

use chrono::{SecondsFormat, Utc};

pub use config::{load_config, parse_config, ConfigError, ExperimentConfig, Scenario, ScenarioParams};
pub use manifest::{read_manifest, Assertion, RunManifest, MANIFEST_FILE};
pub use report::{render, ReportFormat};
pub use scenarios::{Outcome, Table};

use crate::error::Result;

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn write_table(dir: &Path, t: &Table) -> Result<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&t.header).map_err(|e| crate::Error::arg(e.to_string()))?;
        for r in &t.rows {
            w.write_record(r).map_err(|e| crate::Error::arg(e.to_string()))?;
        }
        w.flush()?;
    }
    manifest::write_atomic(&dir.join(&t.file), &buf)
}

/// Runs the scenario of `cfg` and writes its outputs under `cfg.output_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest> {
    let started = now();
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir)?;
    let outcome = scenarios::run_scenario(cfg)
        .unwrap_or_else(|e| Outcome { assertions: vec![Assertion::failed("scenario_completed", e.to_string())], ..Default::default() });

    let mut files = Vec::new();
    let mut assertions = outcome.assertions;
    for t in &outcome.tables {
        match write_table(dir, t) {
            Ok(()) => files.push(t.file.clone()),
            Err(e) => assertions.push(Assertion::failed("output_written", format!("{}: {e}", t.file))),
        }
    }
    let m = RunManifest {
        scenario: cfg.scenario.name().into(),
        config_hash: cfg.hash.clone(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.seed,
        deterministic: crate::par::deterministic(),
        started,
        finished: now(),
        files,
        assertions,
        extras: outcome.extras,
    };
    manifest::write_manifest(dir, &m)?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_conservation(dir: &Path) -> ExperimentConfig {
        let text = serde_json::json!({
            "scenario": "conservation",
            "grid": {"box_side": 8.0, "nx": 16, "my": 3, "dt": 0.01},
            "output_dir": dir,
            "params": {"t_final": 0.05, "data": {"sigma": 1.0, "h1_norm": 0.0}}
        })
        .to_string();
        parse_config(&text).unwrap()
    }

    #[test]
    fn zero_data_conservation_passes_trivially() {
        let dir = tempfile::tempdir().unwrap();
        let m = run(&zero_conservation(dir.path())).unwrap();
        assert!(m.passed(), "{m:?}");
        assert_eq!(m.files, vec!["conservation.csv"]);
        let ratio = m.assertions.iter().find(|a| a.name == "energy_drift_ratio").unwrap();
        assert_eq!(ratio.tolerance, "trivial");
        let mut listed: Vec<String> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .filter(|n| n != MANIFEST_FILE)
            .collect();
        listed.sort();
        assert_eq!(listed, m.files);
    }

    #[test]
    fn scenario_errors_become_failed_assertions() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = zero_conservation(dir.path());
        if let ScenarioParams::Conservation(p) = &mut cfg.params {
            p.t_final = 0.055;
        }
        let m = run(&cfg).unwrap();
        assert!(!m.passed());
        assert_eq!(m.assertions[0].name, "scenario_completed");
        assert!(dir.path().join(MANIFEST_FILE).exists());
    }
}
