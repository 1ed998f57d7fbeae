use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lightlike::cli::{RunReport, EXIT_CONFIG, EXIT_FAILURE, EXIT_OK};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lightlike"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lightlike-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_examples(dir: &Path) {
    let out = bin()
        .arg("examples")
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(EXIT_OK),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> RunReport {
    RunReport::from_json(&String::from_utf8_lossy(&out.stdout)).expect("stdout is a report")
}

#[test]
fn examples_print_and_write_presets() {
    let out = bin().arg("examples").output().unwrap();
    assert_eq!(code(&out), EXIT_OK);
    let map: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for name in ["fixture-a", "fixture-b", "fixture-b-ascreen", "null-cone"] {
        assert!(map.get(name).is_some(), "missing {name}");
    }
    let dir = scratch("examples");
    write_examples(&dir);
    assert!(dir.join("null-cone.json").is_file());
}

#[test]
fn classify_fixtures() {
    let dir = scratch("classify");
    write_examples(&dir);
    let out = bin()
        .arg("classify")
        .arg(dir.join("fixture-a.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_OK);
    let r = report(&out);
    assert_eq!(
        r.summary.class_counts.get("inascreen, tangential"),
        Some(&3)
    );

    let out = bin()
        .arg("classify")
        .arg(dir.join("fixture-b-ascreen.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_OK);
    let r = report(&out);
    let class = r.records[0].classification.as_ref().unwrap();
    assert_eq!(class.class, "ascreen");
    assert!((class.lambda.unwrap() + 2.0).abs() <= 1e-9);
}

#[test]
fn verify_null_cone_preset_passes() {
    let dir = scratch("verify");
    write_examples(&dir);
    let out = bin()
        .arg("verify")
        .arg(dir.join("null-cone.json"))
        .output()
        .unwrap();
    assert_eq!(
        code(&out),
        EXIT_OK,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r.records.len(), 16);
    let sym = r
        .identities
        .iter()
        .find(|e| e.name == "gauss_weingarten.symmetry")
        .expect("symmetry residual reported");
    assert!(sym.passed && sym.max_residual <= 1e-5);
}

#[test]
fn global_flags_override_config() {
    let dir = scratch("flags");
    write_examples(&dir);
    let out = bin()
        .args([
            "--tol",
            "1e-8",
            "--fd-step",
            "2e-5",
            "--seed",
            "11",
            "verify",
        ])
        .arg(dir.join("fixture-b.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_OK);
    let r = report(&out);
    assert_eq!(r.config.seed, 11);
    assert_eq!(r.config.tolerances.fd_step, 2e-5);
    assert_eq!(r.config.tolerances.null, 1e-8);

    let out = bin()
        .args(["--fd-step", "-1", "verify"])
        .arg(dir.join("fixture-b.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_CONFIG);
}

#[test]
fn frame_on_and_off_the_hypersurface() {
    let dir = scratch("frame");
    write_examples(&dir);
    let config = dir.join("fixture-a.json");
    let out = bin()
        .arg("frame")
        .arg(&config)
        .arg("--point=1,0,1,0,0")
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_OK);
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(record.get("frame").is_some());

    let out = bin()
        .arg("frame")
        .arg(&config)
        .arg("--point=1,0,0,0,0")
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_FAILURE);
    assert!(!out.stderr.is_empty());

    let out = bin()
        .arg("frame")
        .arg(&config)
        .arg("--point=1,0,1")
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_CONFIG);
}

#[test]
fn bad_configs_exit_with_config_code() {
    let dir = scratch("bad");
    let riemannian = dir.join("riemannian.json");
    std::fs::write(
        &riemannian,
        r#"{"ambient": {"n_pairs": 2, "signs": [1, 1]},
            "hypersurface": {"kind": "builtin", "name": "null-cone"},
            "points": [[1, 0, 0, 0, 1]]}"#,
    )
    .unwrap();
    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    for path in [riemannian, garbage, dir.join("missing.json")] {
        let out = bin().arg("verify").arg(&path).output().unwrap();
        assert_eq!(code(&out), EXIT_CONFIG, "{}", path.display());
    }
}

#[test]
fn off_surface_points_fail_verification() {
    let dir = scratch("offsurface");
    let path = dir.join("off.json");
    std::fs::write(
        &path,
        r#"{"ambient": {"n_pairs": 2, "signs": [-1, 1]},
            "hypersurface": {"kind": "builtin", "name": "fixture-a"},
            "points": [[0, 0, 0, 0, 0], [1, 0, 0, 0, 0]]}"#,
    )
    .unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(code(&out), EXIT_FAILURE);
    let r = report(&out);
    assert_eq!(r.summary.errors, 1);
    assert!(r.records[1].error.is_some());
}
