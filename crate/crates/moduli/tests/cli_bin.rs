//! Smoke tests against the actual `moduli` binary: flag grammar, exit
//! codes, and the stability of machine-readable output.

use std::process::Command;

fn moduli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_moduli"))
        .args(args)
        .env_remove("MODULI_BUDGET")
        .output()
        .expect("binary runs")
}

#[test]
fn motive_prints_class_and_count() {
    let out = moduli(&["motive", "--n", "1", "--q", "5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "L^11 - L^9 ; #_5 = 46875000\n");
}

#[test]
fn usage_errors_exit_2() {
    let out = moduli(&["motive"]);
    assert_eq!(out.status.code(), Some(2));
    let out = moduli(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
    let out = moduli(&["classify", "--q", "5", "--n", "1", "--a4", "bogus", "--a6", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("1,0,2"), "parse errors show the worked example: {stderr}");
}

#[test]
fn motive_warns_on_char_2_and_3() {
    let out = moduli(&["motive", "--n", "1", "--q", "9"]);
    assert!(out.status.success(), "warn, not refuse");
    assert!(String::from_utf8_lossy(&out.stderr).contains("char"));
}

#[test]
fn budget_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_moduli"))
        .args(["poly-count", "--q", "5", "--d1", "2", "--d2", "2", "--oracle"])
        .env("MODULI_BUDGET", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("625"), "budget error states the requirement: {stderr}");
}

#[test]
fn zq_emits_csv_and_summary() {
    let out = moduli(&["zq", "--Bmax", "200", "--grid", "log10"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("B,count"));
    let last = stdout.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(last).expect("summary is JSON");
    assert_eq!(v["schema"], 1);
    assert!(v["disclaimer"].as_str().unwrap().contains("conjecture-exploration"));
}
