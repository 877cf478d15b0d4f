use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bicotwist"));
    c.env_remove("BICOTWIST_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn instances_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn builtin_json(name: &str) -> Value {
    let text = std::fs::read_to_string(instances_dir().join(format!("{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn write_instance(dir: &tempfile::TempDir, v: &Value) -> String {
    let p = dir.path().join("instance.json");
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn all_on_z4_passes_with_the_braiding_theorem() {
    let o = run(&["all", "FIX-Z4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("sigma_twist == braiding(twist_bimodule): pass\n"), "{text}");
    assert!(text.contains("summary: "));
}

#[test]
fn missing_metric_is_a_finding_not_a_failure() {
    let o = run(&["metrics", "FIX-Z4-1dim"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("biinvariant space dimension: 0\n"));
}

#[test]
fn shipped_instance_files_match_the_builtins() {
    for name in bicotwist::BUILTINS {
        let path = instances_dir().join(format!("{name}.json"));
        let from_file = bicotwist::load(path.to_str().unwrap()).unwrap();
        assert_eq!(from_file, bicotwist::builtin(name).unwrap(), "{name}");
    }
}

#[test]
fn file_and_builtin_give_identical_reports() {
    let path = instances_dir().join("FIX-Z4.json");
    let a = run(&["all", path.to_str().unwrap()]);
    let b = run(&["all", "FIX-Z4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_are_byte_identical_across_runs_and_scheduling() {
    for fmt in ["text", "json"] {
        let first = run(&["all", "FIX-S3", "--format", fmt]);
        assert_eq!(first.status.code(), Some(0));
        let again = run(&["all", "FIX-S3", "--format", fmt]);
        let par = run(&["all", "FIX-S3", "--format", fmt, "--parallel"]);
        assert_eq!(first.stdout, again.stdout, "{fmt}");
        assert_eq!(first.stdout, par.stdout, "{fmt}");
    }
}

#[test]
fn seed_changes_nothing_but_the_search_order() {
    let plain = run(&["metrics", "FIX-Z4"]);
    let seeded = bin().args(["metrics", "FIX-Z4"]).env("BICOTWIST_SEED", "7").output().unwrap();
    let seeded2 = bin().args(["metrics", "FIX-Z4"]).env("BICOTWIST_SEED", "7").output().unwrap();
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(seeded.status.code(), Some(0));
    assert_eq!(seeded.stdout, seeded2.stdout);
    let dim = |o: &Output| {
        stdout(o)
            .lines()
            .find(|l| l.starts_with("biinvariant space dimension"))
            .map(str::to_string)
    };
    assert_eq!(dim(&plain), dim(&seeded));
}

#[test]
fn exit_code_two_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();

    let o = run(&["frobnicate", "FIX-Z4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown command"));

    let o = run(&["verify", "FIX-NOPE"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bin().args(["verify", "FIX-Z4"]).env("BICOTWIST_SEED", "-3").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("BICOTWIST_SEED"));

    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"name\": \"x\",\n  \"N\": }").unwrap();
    let o = run(&["verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let mut v = builtin_json("FIX-Z4");
    v["yd_module"]["degrees"] = json!(["u"]);
    let o = run(&["verify", &write_instance(&dir, &v)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("yd.degrees length"), "{}", stderr(&o));

    let o = run(&["verify", "FIX-Z4", "--format", "yaml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_group_table_is_rejected_with_the_failed_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = builtin_json("FIX-Z4");
    // u.u := u
    v["algebra"] = json!({
        "kind": "group_algebra",
        "labels": ["e", "u", "u2", "u3"],
        "table": [[0, 1, 2, 3], [1, 1, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2]]
    });
    let o = run(&["verify", &write_instance(&dir, &v)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("algebra: associativity fails at ("), "{err}");
}

#[test]
fn corrupted_yetter_drinfeld_action_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = builtin_json("FIX-Z4");
    // u and u3 swap v1 and v2, a module action that does not preserve degrees
    let id = json!([["1", "0"], ["0", "1"]]);
    let swap = json!([["0", "1"], ["1", "0"]]);
    v["yd_module"]["action"] = json!([id, swap, id, swap]);
    let o = run(&["verify", &write_instance(&dir, &v), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|c| c["id"].as_str().unwrap().starts_with("yd.")), "{failed:?}");
    for c in &failed {
        let w = c["witness"].as_str().unwrap();
        assert!(w.contains('('), "witness without indices: {w}");
    }
    assert!(stderr(&o).starts_with("failed: yd."), "{}", stderr(&o));
}

#[test]
fn non_unital_cocycle_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = builtin_json("FIX-Z4");
    let mut values = vec![vec![json!("1"); 4]; 4];
    values[1][0] = json!("2");
    v["cocycle"] = json!({"type": "matrix", "values": values});
    let o = run(&["verify", &write_instance(&dir, &v)]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("cocycle.unital: FAIL ["), "{text}");
}

#[test]
fn out_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let o = run(&["braiding", "FIX-S3", "--format", "json", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["instance"], "FIX-S3");
    let sq = v["findings"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["key"] == "sigma squared is identity")
        .unwrap();
    assert_eq!(sq["value"], json!(false));
}

#[test]
fn timings_are_opt_in() {
    let o = run(&["braiding", "FIX-Z4", "--format", "json"]);
    assert!(!stdout(&o).contains("micros"));
    let o = run(&["braiding", "FIX-Z4", "--format", "json", "--timings"]);
    assert!(stdout(&o).contains("micros"));
}

#[test]
fn json_reports_validate_against_the_schema() {
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap(),
    )
    .unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut v = builtin_json("FIX-Z4");
    v["cocycle"] = json!({"type": "matrix", "values": vec![vec![json!("2"); 4]; 4]});
    let failing = write_instance(&dir, &v);
    let mut cases: Vec<Vec<String>> = bicotwist::BUILTINS
        .iter()
        .map(|n| vec!["all".into(), n.to_string()])
        .collect();
    cases.push(vec!["verify".into(), failing]);
    cases.push(vec!["braiding".into(), "FIX-Z4".into(), "--timings".into()]);
    for args in cases {
        let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
        a.extend(["--format", "json"]);
        let o = run(&a);
        let report: Value = serde_json::from_slice(&o.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let bad = json!({"instance": "x", "checks": [{"id": "a", "status": "ok"}], "findings": [], "summary": {"passed": 0, "failed": 0}});
    assert!(!validator.is_valid(&bad));
    let float = json!({"instance": "x", "checks": [], "findings": [{"key": "k", "value": 0.5}], "summary": {"passed": 0, "failed": 0}});
    assert!(!validator.is_valid(&float));
}
