use std::fs;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circuit-evo"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dump_table_critical() {
    let o = cli(&["dump-table", "critical"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let values: Vec<f64> = text.lines().map(|l| l.trim().parse().unwrap()).collect();
    assert_eq!(
        values,
        [0.394221, 0.094721, 0.239492, 0.408455, 0.0, 0.730203, 0.915034, 1.0]
    );
}

#[test]
fn dump_table_rule_90() {
    let o = cli(&["dump-table", "rule:90"]);
    assert!(o.status.success());
    let values: Vec<f64> = stdout(&o).lines().map(|l| l.trim().parse().unwrap()).collect();
    // 90 = 0b01011010, entry k is bit k.
    assert_eq!(values, [0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0]);
}

#[test]
fn dump_table_rejects_bad_rule() {
    let o = cli(&["dump-table", "rule:256"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn measure_bell_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.txt");
    fs::write(&path, "qubits 2\nH 0\nCNOT 0 1\n").unwrap();
    let o = cli(&["measure", path.to_str().unwrap(), "--metric", "mw"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn measure_reports_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "qubits 2\nFOO 0\n").unwrap();
    let o = cli(&["measure", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn evolve_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = cli(&[
        "evolve",
        "--fitness",
        "mw",
        "--runs",
        "2",
        "--generations",
        "5",
        "--seed",
        "3",
        "--quiet",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["config.json", "run_0.json", "run_1.json", "summary.csv", "best_circuit.txt"] {
        assert!(out.join(name).exists(), "missing {name}");
    }
    let config: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("config.json")).unwrap()).unwrap();
    assert_eq!(config["seed"], 3);
    assert_eq!(config["runs"], 2);
}

#[test]
fn evolve_rejects_target_for_mw() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&[
        "evolve",
        "--fitness",
        "mw",
        "--target",
        "critical",
        "--quiet",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
}
