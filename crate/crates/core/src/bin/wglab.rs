use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wglab::lattice::{self, LatticePoint};
use wglab::runner::{self, ReportFormat};

#[derive(Parser)]
#[command(name = "wglab", version, about = "NLS on R^2 x T^2: scenarios, reports and resonance combinatorics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scenario described by a JSON config.
    Run { config: PathBuf },
    /// Summarize a run manifest.
    Report {
        manifest: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Resonance-set combinatorics, printed as CSV.
    #[command(subcommand)]
    Resonance(ResonanceCmd),
}

#[derive(Subcommand)]
enum ResonanceCmd {
    /// Resonant triples of one output index.
    Enum {
        #[arg(long, value_parser = parse_point)]
        j: LatticePoint,
        #[arg(long)]
        trunc: i64,
        #[arg(long)]
        fast: bool,
    },
    /// Weight sums for every |j|∞ ≤ jmax.
    WeightSum {
        #[arg(long)]
        jmax: i64,
        #[arg(long)]
        trunc: i64,
    },
    /// Lattice points on a circle given by twice its center and four times its squared radius.
    Circle {
        #[arg(long, value_parser = parse_point)]
        center2x: LatticePoint,
        #[arg(long)]
        r2x4: i64,
        #[arg(long, default_value_t = 1.0)]
        amin: f64,
    },
}

fn parse_point(s: &str) -> Result<LatticePoint, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok(LatticePoint::new(p(a)?, p(b)?))
}

const CONFIG_ERROR: u8 = 2;

fn resonance(cmd: ResonanceCmd) -> wglab::Result<String> {
    let mut out = String::new();
    match cmd {
        ResonanceCmd::Enum { j, trunc, fast } => {
            let triples = if fast { lattice::enumerate_resonant_triples_fast(j, trunc)? } else { lattice::enumerate_resonant_triples(j, trunc)? };
            out.push_str("j1_a,j1_b,j2_a,j2_b,j3_a,j3_b\n");
            for t in triples {
                out.push_str(&format!("{},{},{},{},{},{}\n", t.j1.a, t.j1.b, t.j2.a, t.j2.b, t.j3.a, t.j3.b));
            }
        }
        ResonanceCmd::WeightSum { jmax, trunc } => {
            out.push_str("j_a,j_b,weight_sum\n");
            for j in lattice::ball(jmax) {
                out.push_str(&format!("{},{},{:e}\n", j.a, j.b, lattice::weight_sum(j, trunc)?));
            }
        }
        ResonanceCmd::Circle { center2x, r2x4, amin } => {
            let points = lattice::circle_lattice_points(center2x, r2x4)?.len();
            let sum = lattice::circle_lattice_sum(center2x, r2x4, amin)?;
            out.push_str("center2x_a,center2x_b,r2x4,amin,points,sum\n");
            out.push_str(&format!("{},{},{r2x4},{amin},{points},{sum:e}\n", center2x.a, center2x.b));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { config } => {
            let cfg = match runner::load_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(CONFIG_ERROR);
                }
            };
            match runner::run(&cfg) {
                Ok(m) => {
                    print!("{}", runner::render(&m, ReportFormat::Text));
                    if m.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("run failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Cmd::Report { manifest, json } => match runner::read_manifest(&manifest) {
            Ok(m) => {
                let fmt = if json { ReportFormat::Json } else { ReportFormat::Text };
                print!("{}", runner::render(&m, fmt));
                if m.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => {
                eprintln!("cannot read manifest {}: {e}", manifest.display());
                ExitCode::from(CONFIG_ERROR)
            }
        },
        Cmd::Resonance(cmd) => match resonance(cmd) {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(CONFIG_ERROR)
            }
        },
    }
}
