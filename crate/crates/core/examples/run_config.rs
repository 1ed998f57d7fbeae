//! Runs the full verification suite from a JSON configuration, the same way
//! the `lightlike verify` command does.

use lightlike::cli::{run_verify, RunConfig};

const CONFIG: &str = r#"{
  "ambient": {"n_pairs": 2, "signs": [-1, 1]},
  "hypersurface": {"kind": "builtin", "name": "null-cone"},
  "screen_policy": {"kind": "basis-scan"},
  "points": {"sample": {"count": 16, "seed": 7, "box": {"min": -1.0, "max": 1.0}}},
  "tolerances": {"null": 1e-9, "residual": 1e-9, "fd_step": 1e-5, "gw": 1e-5},
  "trials": 200,
  "seed": 7
}"#;

fn main() -> lightlike::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let report = run_verify(&config)?;
    for e in &report.identities {
        println!(
            "{:<32} {:>10.2e} <= {:<8.0e} {}",
            e.name,
            e.max_residual,
            e.tol,
            if e.passed { "ok" } else { "FAIL" }
        );
    }
    println!("classes: {:?}", report.summary.class_counts);
    println!(
        "passed: {} (exit code {})",
        report.summary.passed,
        report.exit_code()
    );
    Ok(())
}
