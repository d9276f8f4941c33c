//! End-to-end checks of the `poisson-forms` binary: exit codes, JSON output
//! and reproducibility.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poisson-forms"))
}

#[test]
fn no_subcommand_is_a_usage_error() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_family_is_a_usage_error() {
    let out = bin().args(["inspect", "--family", "su", "--p", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown family"));
}

#[test]
fn out_of_range_k_is_a_usage_error() {
    let out = bin()
        .args(["kernel", "--family", "so", "--p", "3", "--k", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_so31_k1_passes_and_reports_coclosed() {
    let out = bin()
        .args(["verify", "--family", "so", "--p", "3", "--q", "1", "--k", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verify emits JSON");
    assert_eq!(report["algebra"], "so(3,1)");
    assert_eq!(report["bidegree_ok"], true);
    assert_eq!(report["invariant"], true);
    assert_eq!(report["coclosed"], true);
    assert_eq!(report["pairing_ok"], true);
}

#[test]
fn inspect_sl3_shows_contact_grading_dims() {
    let out = bin()
        .args(["inspect", "--family", "sl", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("algebra sl(3,R)"));
    // |1|-grading of the Borel: dims 1,2,2,2,1 for i = -2..2
    for line in ["g_-2 : 1", "g_-1 : 2", "g_0 : 2", "g_1 : 2", "g_2 : 1"] {
        assert!(text.contains(line), "missing {:?} in:\n{}", line, text);
    }
}

#[test]
fn kernel_output_is_reproducible() {
    let args = ["kernel", "--family", "so", "--p", "4", "--k", "2"];
    let first = bin().args(args).output().unwrap();
    let second = bin().args(args).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let json: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(json["k"], 2);
    assert!(json["kernel"]["coeffs"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn transform_const_density_at_minus_rho_is_one() {
    let out = bin()
        .args(["transform", "--n", "1", "--lambda", "-0.5", "--density", "const"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let base = json["value_at_base"].as_f64().unwrap();
    let boosted = json["value_at_unit_boost"].as_f64().unwrap();
    assert!((base - 1.0).abs() < 1e-12);
    assert!((boosted - 1.0).abs() < 1e-10);
}

#[test]
fn transform_rejects_tiny_fd_step_as_runtime_error() {
    let out = bin()
        .args(["transform", "--n", "1", "--lambda", "0.0", "--fd-step", "1e-9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("step"));
}
