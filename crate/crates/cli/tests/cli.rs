use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrd")).args(args).env_remove("MRD_WORKERS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn write_output(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let o = mrd(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let path = dir.join(name);
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_mrd_on_fixture() {
    let dir = TempDir::new().unwrap();
    let code2 = write_output(dir.path(), "code2.json", &["construct", "fixture", "code2"]);
    let o = mrd(&["verify", "mrd", s(&code2)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["is_mrd"], true);
    assert_eq!(v["k"], 1);
    assert_eq!(v["d"], 4);
}

#[test]
fn failing_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let c = write_output(dir.path(), "g.json", &["construct", "gabidulin", "--q", "2", "--m", "3", "--n", "3", "--k", "2"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    // Keep one basis matrix: a 2-element code that is not MRD.
    let first = v["basis"][0].clone();
    v["basis"] = Value::Array(vec![first]);
    std::fs::write(&c, v.to_string()).unwrap();
    let o = mrd(&["verify", "mrd", s(&c)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["is_mrd"], false);
}

#[test]
fn usage_errors_exit_two_with_json() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let o = mrd(&["verify", "mrd", s(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");

    let o = mrd(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");

    let o = mrd(&["reproduce", "no-such-claim"]);
    assert_eq!(o.status.code(), Some(2));

    let o = mrd(&["construct", "dickson", "--q", "3", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_json(&o)["message"].as_str().unwrap().contains("conditions"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"m\": 2,\n  ]").unwrap();
    let o = mrd(&["verify", "mrd", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "parse");
    assert_eq!(e["line"], 3);

    let o = mrd(&["verify", "mrd", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "io");
}

#[test]
fn reproduce_rank_distribution() {
    let o = mrd(&["reproduce", "sec6-rankdist"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("PASS sec6-rankdist"), "{line}");
    assert!(line.contains("2:338, 3:390"));
}

#[test]
fn reproduce_quick_claims() {
    for claim in ["sl25", "dual-27", "knarr-16", "ex16-classes"] {
        let o = mrd(&["reproduce", claim]);
        assert_eq!(o.status.code(), Some(0), "{claim}: {}", stdout(&o));
        assert!(stdout(&o).starts_with(&format!("PASS {claim}")));
    }
}

#[test]
fn code3_export_is_canonical() {
    let dir = TempDir::new().unwrap();
    let c = write_output(dir.path(), "code3.json", &["construct", "fixture", "code3"]);
    let out = dir.path().join("again.json");
    // The dual of the dual is the code itself, re-exported.
    let d = write_output(dir.path(), "dual.json", &["dual", s(&c)]);
    let o = mrd(&["dual", s(&d), "--out", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    let again: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let elements = |v: &Value| v.get("elements").or(v.get("basis")).cloned();
    assert!(elements(&original).is_some() && elements(&again).is_some());
    let o = mrd(&["equiv", s(&c), s(&out), "--mode", "additive"]);
    assert_eq!(json_out(&o)["equivalent"], true);
}

#[test]
fn equivalence_witness_verifies() {
    let dir = TempDir::new().unwrap();
    let a = write_output(dir.path(), "singer.json", &["construct", "singer", "--q", "2", "--n", "4"]);
    let b = write_output(dir.path(), "gab.json", &["construct", "gabidulin", "--q", "2", "--m", "4", "--n", "4", "--k", "1"]);
    let o = mrd(&["equiv", s(&a), s(&b)]);
    let v = json_out(&o);
    assert_eq!(v["equivalent"], true);
    let w = dir.path().join("w.json");
    std::fs::write(&w, serde_json::to_string_pretty(&v["witness"]).unwrap()).unwrap();
    let o = mrd(&["verify", "witness", s(&a), s(&b), s(&w)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["maps_onto_target"], true);

    let c2 = write_output(dir.path(), "code2.json", &["construct", "fixture", "code2"]);
    let o = mrd(&["classify", "equiv", s(&a), s(&c2), "--mode", "additive"]);
    assert_eq!(json_out(&o)["equivalent"], false);
}

#[test]
fn tables_and_isotopy() {
    let dir = TempDir::new().unwrap();
    let n9 = write_output(dir.path(), "n9.json", &["construct", "dickson", "--q", "3", "--n", "2"]);
    assert_eq!(mrd(&["verify", "quasifield", s(&n9)]).status.code(), Some(0));
    assert_eq!(mrd(&["verify", "nearfield", s(&n9)]).status.code(), Some(0));
    let o = mrd(&["verify", "semifield", s(&n9)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json_out(&o)["witness"].is_array());
    let o = mrd(&["isotopy", s(&n9), s(&n9)]);
    assert_eq!(json_out(&o)["isotopic"], true);
    let o = mrd(&["invariants", s(&n9)]);
    assert_eq!(json_out(&o)["structure"]["nearfield"], true);

    let census = mrd(&["classify", "semifields", "--p", "2", "--n", "4"]);
    let v = json_out(&census);
    assert_eq!(v["proper"], 23);
    assert_eq!(v["proper_isotopy_classes"], 2);
    let tables: Vec<&Value> = v["classes"].as_array().unwrap().iter().map(|c| &c["table"]).collect();
    let t0 = dir.path().join("t0.json");
    std::fs::write(&t0, serde_json::to_string(tables[0]).unwrap()).unwrap();
    assert_eq!(mrd(&["verify", "quasifield", s(&t0)]).status.code(), Some(0));
}

#[test]
fn symmetric_verbs() {
    let dir = TempDir::new().unwrap();
    let o = mrd(&["symmetric", "build", "--field", "2", "4", "--form"]);
    assert_eq!(json_out(&o)["gram"]["rows"], 4);
    let c = write_output(dir.path(), "sym.json", &["symmetric", "build", "--field", "3", "3"]);
    let o = mrd(&["invariants", s(&c)]);
    let v = json_out(&o);
    assert_eq!(v["mrd"]["is_mrd"], true);
    assert_eq!(v["rank_distribution"]["3"], 26);
    let t = write_output(dir.path(), "n9.json", &["construct", "dickson", "--q", "3", "--n", "2"]);
    let o = mrd(&["symmetric", "find-form", s(&t), "--kernel"]);
    let v = json_out(&o);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["form"].is_null(), !v["knarr_proper"].as_bool().unwrap());
}

#[test]
fn manifest_records_inputs_and_result() {
    let dir = TempDir::new().unwrap();
    let c = write_output(dir.path(), "code2.json", &["construct", "fixture", "code2"]);
    let m = dir.path().join("m.json");
    let o = mrd(&["invariants", s(&c), "--manifest", s(&m)]);
    assert!(o.status.success());
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(manifest["status"], "pass");
    assert_eq!(manifest["inputs"].as_object().unwrap().len(), 1);
    assert_eq!(manifest["field_moduli"][0]["p"], 2);
    // Rerunning the recorded command reproduces the recorded digest.
    let argv: Vec<String> =
        manifest["command"].as_array().unwrap().iter().skip(1).map(|a| a.as_str().unwrap().to_string()).collect();
    let args: Vec<&str> = argv.iter().map(String::as_str).collect();
    let m2 = dir.path().join("m2.json");
    let mut rerun: Vec<&str> = args.iter().copied().filter(|a| *a != s(&m)).collect();
    rerun.retain(|a| *a != "--manifest");
    rerun.extend(["--manifest", s(&m2)]);
    assert!(mrd(&rerun).status.success());
    let again: Value = serde_json::from_str(&std::fs::read_to_string(&m2).unwrap()).unwrap();
    assert_eq!(again["result_sha256"], manifest["result_sha256"]);
}

#[test]
fn interrupted_classification_resumes_identically() {
    let dir = TempDir::new().unwrap();
    let args = ["classify", "codes", "--q", "2", "--n", "3", "--d", "2"];
    let full = mrd(&args);
    assert!(full.status.success());
    let m = dir.path().join("m.json");
    let mut cmd: Vec<&str> = args.to_vec();
    cmd.extend(["--budget", "4", "--manifest", s(&m)]);
    let mut o = mrd(&cmd);
    let mut rounds = 0;
    while o.status.code() == Some(1) {
        let manifest: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
        assert_eq!(manifest["status"], "interrupted");
        assert!(manifest["resume"].is_object());
        let prev = dir.path().join(format!("m{rounds}.json"));
        std::fs::rename(&m, &prev).unwrap();
        let mut cmd: Vec<&str> = args.to_vec();
        cmd.extend(["--budget", "4", "--resume", s(&prev), "--manifest", s(&m)]);
        o = mrd(&cmd);
        rounds += 1;
        assert!(rounds < 1000);
    }
    assert!(rounds > 0);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, full.stdout);
}

#[test]
fn workers_flag_and_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_mrd")).args(["reproduce", "sec6-rankdist"]).env("MRD_WORKERS", "3").output().unwrap();
    assert!(o.status.success());
    let o = mrd(&["--workers", "0", "reproduce", "sec6-rankdist"]);
    assert_eq!(o.status.code(), Some(2));
}
