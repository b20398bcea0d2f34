use std::path::Path;
use std::process::Command;

use serde_json::json;
use wglab::runner::{parse_config, read_manifest, render, run, ReportFormat, RunManifest, MANIFEST_FILE};

fn combinatorics(dir: &Path) -> String {
    json!({
        "scenario": "resonance_combinatorics",
        "seed": 7,
        "output_dir": dir,
        "params": {"jmax": 2, "trunc": 4, "weight_jmax": 3, "weight_truncs": [4, 8, 16]}
    })
    .to_string()
}

fn zero_conservation(dir: &Path) -> String {
    json!({
        "scenario": "conservation",
        "grid": {"box_side": 8.0, "nx": 16, "my": 3, "dt": 0.01},
        "output_dir": dir,
        "params": {"t_final": 0.05, "data": {"sigma": 1.0, "h1_norm": 0.0}}
    })
    .to_string()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).filter(|n| n != MANIFEST_FILE).collect();
    names.sort();
    names
}

#[test]
fn zero_step_is_reported_at_its_json_path() {
    let text = zero_conservation(Path::new("out")).replace("\"dt\":0.01", "\"dt\":0.0");
    let e = parse_config(&text).unwrap_err();
    assert_eq!(e.path, "grid.dt");
    assert_eq!(e.pointer(), "/grid/dt");
}

#[test]
fn unknown_keys_are_rejected_with_their_path() {
    let text = zero_conservation(Path::new("out")).replace("\"t_final\"", "\"bogus\":1,\"t_final\"");
    let e = parse_config(&text).unwrap_err();
    assert_eq!(e.path, "params.bogus");
}

#[test]
fn same_config_and_seed_give_identical_tables() {
    wglab::par::set_deterministic(true);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ma = run(&parse_config(&combinatorics(a.path())).unwrap()).unwrap();
    let mb = run(&parse_config(&combinatorics(b.path())).unwrap()).unwrap();
    assert!(ma.passed(), "{ma:?}");
    assert!(ma.deterministic);
    assert_eq!(ma.files, mb.files);
    for f in &ma.files {
        let (x, y) = (std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
        assert_eq!(x, y, "{f} differs");
        let text = String::from_utf8(x).unwrap();
        assert!(text.lines().count() > 1, "{f} has no data rows");
    }
}

#[test]
fn manifest_lists_exactly_the_written_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = run(&parse_config(&combinatorics(dir.path())).unwrap()).unwrap();
    assert_eq!(listing(dir.path()), {
        let mut f = m.files.clone();
        f.sort();
        f
    });
    assert_eq!(read_manifest(&dir.path().join(MANIFEST_FILE)).unwrap(), m);
}

#[test]
fn empty_manifest_renders_a_header() {
    let m: RunManifest = serde_json::from_str("{}").unwrap();
    let text = render(&m, ReportFormat::Text);
    assert_eq!(text, "scenario: \nconfig_hash: \ntool_version: \n");
    let v: serde_json::Value = serde_json::from_str(&render(&m, ReportFormat::Json)).unwrap();
    assert_eq!(v["total"], 0);
}

fn wglab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wglab")).args(args).env("WGLAB_DETERMINISTIC", "1").output().unwrap()
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, zero_conservation(&dir.path().join("zero"))).unwrap();
    let out = wglab(&["run", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let manifest = dir.path().join("zero").join(MANIFEST_FILE);
    let out = wglab(&["report", manifest.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, zero_conservation(dir.path()).replace("\"nx\":16", "\"nx\":16,\"colour\":1")).unwrap();
    let out = wglab(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.colour"));

    // an unreachable time step fails the run, not the config
    let failing = dir.path().join("failing.json");
    std::fs::write(&failing, zero_conservation(&dir.path().join("f")).replace("\"t_final\":0.05", "\"t_final\":0.055")).unwrap();
    assert_eq!(wglab(&["run", failing.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(wglab(&["report", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cli_resonance_tables_have_headers() {
    let out = wglab(&["resonance", "enum", "--j", "1,0", "--trunc", "2", "--fast"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("j1_a,j1_b,j2_a,j2_b,j3_a,j3_b\n"));
    assert!(text.lines().count() > 1);

    let out = wglab(&["resonance", "weight-sum", "--jmax", "1", "--trunc", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 9);

    let out = wglab(&["resonance", "circle", "--center2x", "0,0", "--r2x4", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // radius 5: (±5, 0), (0, ±5), (±3, ±4), (±4, ±3)
    assert_eq!(row[4], "12");

    assert_eq!(wglab(&["resonance", "enum", "--j", "9,9", "--trunc", "2"]).status.code(), Some(2));
}
