//! Load a scenario file, run it, and print its checks.
//!
//!     cargo run --release --example run_scenario -- scenarios/c04_eigen.toml

use std::path::PathBuf;

use boussinesq::scenario::{load_scenario, run_scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/c01_phase_bound.toml")));
    let sc = load_scenario(&path)?;
    let out = run_scenario(&sc)?;
    println!("{} ({}): {}", sc.name, sc.kind(), if out.summary.passed { "PASS" } else { "FAIL" });
    for c in &out.summary.checks {
        println!("  {:40} {:.4e} {:?} {:.4e}", c.name, c.value, c.comparison, c.threshold);
    }
    println!("series: {} rows x {} columns", out.series.rows.len(), out.series.columns.len());
    Ok(())
}
