use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_borcherds"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("BORCHERDS_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE: &str = "{  (0,0) : { 0 : 1, 1 : 2 },  (1,0) : { 1/3 : 4 },\n    (-1,0) : { 1/3 : 4 } }";

#[test]
fn convert_then_validate_example() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("example.txt");
    let dst = dir.path().join("example.json");
    std::fs::write(&src, EXAMPLE).unwrap();
    let o = run(&["convert", "-i", src.to_str().unwrap(), "--weight", "0", "-o", dst.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["validate", "-i", dst.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let comps: Vec<(Vec<i64>, String)> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let key = c["key"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
            (key, c["residue"].as_str().unwrap().to_string())
        })
        .collect();
    assert_eq!(
        comps,
        vec![(vec![-1, 0], "1/3".to_string()), (vec![0, 0], "0".to_string()), (vec![1, 0], "1/3".to_string())]
    );
}

#[test]
fn compute_reproduces_published_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("phi45.csv");
    let o = run(&[
        "compute",
        "-i",
        fixture("phi45_input.json").to_str().unwrap(),
        "-B",
        "7",
        "--format",
        "csv",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("a,b1,b2,c,coefficient\n"));
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("table2_expected.json")).unwrap()).unwrap();
    let entries = expected["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 10);
    for e in entries {
        let i: Vec<i64> = e["index"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        let line = format!("{},{},{},{},{}\n", i[0], i[1], i[2], i[3], e["coeff"].as_str().unwrap());
        assert!(csv.contains(&line), "missing {line}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let f = fixture("phi45_input.json");
    let a = run(&["compute", "-i", f.to_str().unwrap(), "-B", "6"]);
    let b = run(&["--threads", "1", "compute", "-i", f.to_str().unwrap(), "-B", "6"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_checks_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("timings.csv");
    let f = fixture("phi45_input.json");
    let o = run(&["bench", "-i", f.to_str().unwrap(), "--from", "5", "--to", "7", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn restrict_phi45_vanishes() {
    let f = fixture("phi45_input.json");
    let o = run(&["restrict", "-i", f.to_str().unwrap(), "-B", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn precision_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("short.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("phi45_input.json")).unwrap()).unwrap();
    doc["precision"] = serde_json::json!("2");
    for comp in doc["components"].as_array_mut().unwrap() {
        let terms = comp["terms"].as_array_mut().unwrap();
        terms.retain(|t| borcherds::rat::parse(t["exp"].as_str().unwrap()).unwrap() <= borcherds::rat::int(2));
    }
    std::fs::write(&p, doc.to_string()).unwrap();
    let o = run(&["--json-errors", "compute", "-i", p.to_str().unwrap(), "-B", "7"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["error"], "insufficient_precision");
    assert!(err["required_precision"].is_string());
}

#[test]
fn validation_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"D": -3, "weight": 0, "components": [{"key": [2, 0], "terms": []}]}"#).unwrap();
    let o = run(&["--json-errors", "validate", "-i", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["error"], "non_reduced_key");
}
