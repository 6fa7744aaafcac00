//! Exit-code and format contracts of the command-line interface.

use std::process::Command;

fn coiso() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coiso"))
}

#[test]
fn unknown_label_exits_2() {
    let out = coiso().args(["report", "no-such-pair"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown label"));
}

#[test]
fn bad_usage_exits_2() {
    let out = coiso().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_weight_exits_2() {
    let out = coiso()
        .args(["branch", "table1-4", "not-a-weight"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_json_has_documented_fields() {
    let out = coiso()
        .args(["report", "table1-3", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ctilde"], 1);
    assert_eq!(v["defect"], 1);
    assert_eq!(v["s_regular"], true);
    assert_eq!(v["rtilde"], 5);
    assert_eq!(v["nullcone_dim"], 15);
    assert_eq!(v["generic_stab_rank"], 0);
    assert_eq!(v["inequality_verdicts"]["eq35_first"], "strict");
}

#[test]
fn branch_text_matches_notation() {
    let out = coiso().args(["branch", "table1-4", "adjoint"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "ϖ₁ϖ₂ + ϖ₁ + ϖ₂"
    );
}

#[test]
fn branch_accepts_explicit_weights() {
    let out = coiso().args(["branch", "table1-3", "0,0,1"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ϖ₁ + 1");
}

#[test]
fn verify_all_csv_is_tabular() {
    let out = coiso()
        .args(["verify-all", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "label,quantity,status,expected,computed");
    assert!(text.lines().count() > 50);
    assert!(!text.contains("mismatch,"));
}

#[test]
fn verification_failure_exits_1() {
    // a syntactically valid catalog whose expected value is wrong
    let dir = std::env::temp_dir().join(format!("coiso-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.toml");
    std::fs::write(
        &file,
        r#"
schema_version = 1
[[entry]]
label = "wrong-expectation"
provenance = "negative control"
big = { factors = ["A2"] }
small = { factors = ["A1"] }
restriction = [["2", "2"]]
expected = { ctilde = 7 }
"#,
    )
    .unwrap();
    let out = coiso()
        .args(["verify-all", "--catalog"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("MISMATCH"));

    // malformed catalog exits 2
    std::fs::write(&file, "schema_version = 99\n").unwrap();
    let out = coiso()
        .args(["verify-all", "--catalog"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_var_sets_catalog_path() {
    let dir = std::env::temp_dir().join(format!("coiso-env-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        dir.join("only.toml"),
        r#"
schema_version = 1
[[entry]]
label = "env-pair"
provenance = "env test"
big = { factors = ["A2"] }
small = { factors = ["A1"] }
restriction = [["2", "2"]]
expected = { ctilde = 1 }
"#,
    )
    .unwrap();
    let out = coiso()
        .env("COISO_CATALOG", &dir)
        .args(["list"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("env-pair"));
    assert!(!text.contains("table1-3"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn poisson_check_runs_both_sets() {
    let out = coiso()
        .args(["poisson-check", "table1-7s", "--points", "25", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["set"] == "binary-quadratics"));
    assert!(checks.iter().any(|c| c["set"] == "sp4-short-levi" && c["kind"] == "rank"));
}

#[test]
fn seeded_runs_are_reproducible_and_seeds_differ() {
    let run = |seed: &str| {
        coiso()
            .args(["poisson-check", "sym-sl3-so3", "--points", "5", "--seed", seed])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("1");
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}
