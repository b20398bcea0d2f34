//! Rendering a manifest as text or JSON. Both forms carry the same facts.

use serde::Serialize;

use super::manifest::{Assertion, RunManifest};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    scenario: &'a str,
    config_hash: &'a str,
    tool_version: &'a str,
    passed: bool,
    passed_count: usize,
    total: usize,
    assertions: &'a [Assertion],
    extras: &'a std::collections::BTreeMap<String, serde_json::Value>,
}

fn value_text(a: &Assertion) -> String {
    match a.value {
        Some(v) => format!("{v:e}"),
        None => "-".into(),
    }
}

/// Deterministic summary of `m`. An empty manifest renders its header only.
pub fn render(m: &RunManifest, format: ReportFormat) -> String {
    let passed_count = m.assertions.iter().filter(|a| a.passed).count();
    match format {
        ReportFormat::Json => {
            let r = JsonReport {
                scenario: &m.scenario,
                config_hash: &m.config_hash,
                tool_version: &m.tool_version,
                passed: m.passed(),
                passed_count,
                total: m.assertions.len(),
                assertions: &m.assertions,
                extras: &m.extras,
            };
            let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut s = format!("scenario: {}\nconfig_hash: {}\ntool_version: {}\n", m.scenario, m.config_hash, m.tool_version);
            if m.assertions.is_empty() && m.extras.is_empty() {
                return s;
            }
            for (k, v) in &m.extras {
                s.push_str(&format!("{k}: {v}\n"));
            }
            for a in &m.assertions {
                let status = if a.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status} {} value={} tolerance={}", a.name, value_text(a), a.tolerance));
                if !a.detail.is_empty() {
                    s.push_str(&format!(" ({})", a.detail));
                }
                s.push('\n');
            }
            s.push_str(&format!("{passed_count}/{} assertions passed\n", m.assertions.len()));
            s
        }
    }
}
