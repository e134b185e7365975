use std::path::Path;
use std::process::{Command, Output};

use ajt_lab::report::{Payload, ReportEnvelope};
use serde_json::Value;

fn ajt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ajt"))
        .args(args)
        .env_remove("AJT_MAX_COEFFS")
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verdict_command() {
    let out = ajt(&["verdict", "--p", "3", "--rows", "1,1;1,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_stdout(&out);
    assert_eq!(v["command"], "verdict");
    assert_eq!(v["payload"]["data"]["verdict"]["z_identity"], true);
    assert_eq!(v["payload"]["data"]["verdict"]["ajt_witness"], Value::Null);

    let out = ajt(&["verdict", "--p", "5", "--rows", "1,0;0,1", "--full"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json_stdout(&out)["payload"]["data"]["verdict"]["fp_identity"],
        false
    );
}

#[test]
fn input_errors_exit_one() {
    let out = ajt(&["verdict", "--p", "4", "--rows", "1,0;0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("4 is not prime"), "{}", stderr(&out));

    let out = ajt(&["verdict", "--p", "3", "--rows", "1,2;2,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("singular"), "{}", stderr(&out));

    let out = ajt(&["verdict", "--p", "3", "--rows", "1,2,3;2,1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = ajt(&["lemma", "--p", "3", "--rows", "1,1;1,2", "--i", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verdict_reads_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"p": 2, "rows": [[1, 1], [1, 0]]}"#).unwrap();
    let out = ajt(&["verdict", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json_stdout(&out)["payload"]["data"]["verdict"]["ajt_witness"],
        Value::Null
    );
}

#[test]
fn lemma_command() {
    let out = ajt(&["lemma", "--p", "3", "--rows", "1,1;1,2", "--i", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_stdout(&out);
    for step in [
        "expansion",
        "b1_routes_agree",
        "b1_zero",
        "bases",
        "ut_identities",
        "factorization",
    ] {
        assert_eq!(
            v["payload"]["data"][step]["outcome"]["status"], "holds",
            "{step}"
        );
    }

    let out = ajt(&["lemma", "--p", "5", "--rows", "1,0;0,1", "--i", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json_stdout(&out)["payload"]["data"]["b1_zero"]["outcome"]["status"],
        "skipped"
    );

    let out = ajt(&["lemma", "--p", "3", "--rows", "1,1,0;1,2,0;0,0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("3^15"), "{}", stderr(&out));
}

#[test]
fn lemma_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ajt"))
        .args(["lemma", "--p", "3", "--rows", "1,1;1,2"])
        .env("AJT_MAX_COEFFS", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("3^6"), "{}", stderr(&out));
}

#[test]
fn scan_exit_codes() {
    let out = ajt(&["scan", "--p", "5", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_stdout(&out);
    assert_eq!(v["payload"]["data"]["totals"]["enumerated"], 480);
    assert_eq!(v["payload"]["data"]["violations"], Value::Array(vec![]));

    let out = ajt(&["scan", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!json_stdout(&out)["payload"]["data"]["violations"]
        .as_array()
        .unwrap()
        .is_empty());

    let out = ajt(&["scan", "--p", "7", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

fn scan_report(path: &Path) -> ajt_lab::scan::ScanReport {
    match ReportEnvelope::read(path).unwrap().payload {
        Payload::Scan(r) => r,
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn sharded_scan_merges_to_the_unsharded_report() {
    let dir = tempfile::tempdir().unwrap();
    let whole = dir.path().join("whole.json");
    let out = ajt(&[
        "scan",
        "--p",
        "3",
        "--n",
        "3",
        "--out",
        whole.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    let mut shards = Vec::new();
    for k in 0..3 {
        let path = dir.path().join(format!("shard{k}.json"));
        let cp = dir.path().join(format!("shard{k}.cp"));
        let shard = format!("{k}/3");
        let out = ajt(&[
            "scan",
            "--p",
            "3",
            "--n",
            "3",
            "--shard",
            &shard,
            "--checkpoint",
            cp.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.code() == Some(0) || out.status.code() == Some(3),
            "{}",
            stderr(&out)
        );
        assert!(cp.exists());
        shards.push(path);
    }
    let merged = dir.path().join("merged.json");
    let csv = dir.path().join("merged.csv");
    let mut args = vec!["merge"];
    args.extend(shards.iter().map(|p| p.to_str().unwrap()));
    args.extend([
        "--out",
        merged.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let out = ajt(&args);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    let a = serde_json::to_vec(&scan_report(&whole)).unwrap();
    let b = serde_json::to_vec(&scan_report(&merged)).unwrap();
    assert_eq!(a, b);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2);

    let out = ajt(&[
        "merge",
        shards[0].to_str().unwrap(),
        shards[1].to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_is_deterministic() {
    let a = ajt(&["selftest", "--quick", "--seed", "7"]);
    let b = ajt(&["selftest", "--quick", "--seed", "7"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    assert_eq!(a.stdout, b.stdout);
    let table = String::from_utf8_lossy(&a.stdout);
    assert!(
        table.contains("Leibniz rule") && table.contains("kernel fact"),
        "{table}"
    );
}
