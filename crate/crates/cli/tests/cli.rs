use std::process::Command;

fn sim() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qsdc-sim"));
    cmd.env_remove("QSDC_SIM_THREADS");
    cmd
}

#[test]
fn tables_match_golden() {
    let out = sim().arg("tables").output().unwrap();
    assert!(out.status.success());
    let golden = include_str!("golden/tables.txt");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["run", "--message", "011"][..],
        &["run", "--message", "0101", "--p", "1.5"],
        &["run", "--message", "0101", "--bits", "3"],
        &["run"],
        &["bogus"],
    ] {
        let out = sim().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.json");
    let out = sim()
        .args(["run", "--message", "01", "--trials", "10", "--format", "json", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_to_stdout_is_stable() {
    let run = || {
        sim()
            .args(["run", "--message", "0x1b", "--bits", "8", "--trials", "500"])
            .args(["--eve", "synchronized-naive", "--p", "0.05", "--seed", "9", "--format", "json"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["message"], "00011011");
    assert_eq!(v["trials"], 500);
    assert!(a.stdout.ends_with(b"\n"));
}

#[test]
fn oracle_json_has_exact_values() {
    let out = sim()
        .args(["oracle", "--eve", "synchronized-bell-aware", "--length", "8", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f = |k: &str| v[k].as_f64().unwrap();
    assert!((f("exact_block_success") - 0.5).abs() < 1e-15);
    assert!((f("exact_message_success") - 0.0625).abs() < 1e-15);
    assert!((f("paper_claim_block_success") - 0.0625).abs() < 1e-15);
}
