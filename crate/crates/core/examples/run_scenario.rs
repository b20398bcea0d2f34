//! Drive the runner from an inline config and print its report.

use wglab::runner::{parse_config, render, run, ReportFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("wglab_example_run");
    let text = serde_json::json!({
        "scenario": "resonance_combinatorics",
        "seed": 0,
        "output_dir": out,
        "params": { "jmax": 2, "trunc": 4, "weight_jmax": 2, "weight_truncs": [4, 8, 16] }
    })
    .to_string();
    let cfg = parse_config(&text)?;
    let manifest = run(&cfg)?;
    print!("{}", render(&manifest, ReportFormat::Text));
    println!("files: {:?} in {}", manifest.files, out.display());

    // a config error names the key it is about
    let bad = text.replace("\"seed\"", "\"sede\"");
    if let Err(e) = parse_config(&bad) {
        println!("{e}");
    }
    Ok(())
}
