//! End-to-end checks of the command-line interface: exit-code contract,
//! output formats, and report determinism.

use std::process::Command;

fn kzbkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kzbkit"))
}

#[test]
fn list_prints_the_catalog() {
    let out = kzbkit().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "weierstrass-ode",
        "fay-universal",
        "kernel-T",
        "residue2-table",
        "psi-welldef",
        "kzb-gauge",
        "t1n-dims",
    ] {
        assert!(text.contains(name), "catalog is missing {name}");
    }
}

#[test]
fn dims_json_output() {
    let out = kzbkit()
        .args(["dims", "--n", "2", "--depth", "6", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["dims"], serde_json::json!([4, 1, 2, 3, 6, 9]));
}

#[test]
fn verify_single_item_passes_with_exit_zero() {
    let out = kzbkit()
        .args([
            "verify",
            "--suite",
            "weierstrass-ode",
            "--order",
            "12",
            "--jobs",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["passed"], 1);
    assert_eq!(report["items"][0]["status"], "pass");
}

#[test]
fn injected_fault_fails_with_exit_one_and_counterexample() {
    let out = kzbkit()
        .args([
            "verify",
            "--suite",
            "weierstrass-ode",
            "--order",
            "10",
            "--jobs",
            "1",
            "--inject-fault",
            "wp-a2-denominator",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["items"][0]["status"], "fail");
    assert!(report["items"][0]["counterexample"]
        .as_str()
        .unwrap()
        .contains("offending"));
}

#[test]
fn unknown_item_is_a_usage_error() {
    let out = kzbkit()
        .args(["verify", "--suite", "no-such-item"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_is_deterministic_modulo_durations() {
    let run = || -> serde_json::Value {
        let out = kzbkit()
            .args([
                "verify",
                "--suite",
                "weierstrass-ode",
                "--suite",
                "mu-f-alpha",
                "--order",
                "10",
            ])
            .output()
            .unwrap();
        let mut doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        for item in doc["items"].as_array_mut().unwrap() {
            item["duration_ms"] = 0.into();
        }
        doc
    };
    assert_eq!(run(), run());
}

#[test]
fn markdown_report_to_file() {
    let dir = std::env::temp_dir().join("kzbkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.md");
    let out = kzbkit()
        .args([
            "verify",
            "--suite",
            "weierstrass-ode",
            "--order",
            "10",
            "--format",
            "markdown",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("| weierstrass-ode |"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn profile_env_sets_defaults() {
    let out = kzbkit()
        .env("KZBKIT_PROFILE", "desk")
        .args(["verify", "--suite", "weierstrass-ode", "--order", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["n"], 3);
    let bad = kzbkit()
        .env("KZBKIT_PROFILE", "bogus")
        .args(["verify", "--suite", "weierstrass-ode"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
