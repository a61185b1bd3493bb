use std::fs;
use std::process::Command;

fn sim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hbac-sim")).args(args).output().expect("binary runs")
}

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn limits_reports_bound_factors() {
    let o = sim(&["limits", "--preset", "glycine"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("factor 4.220"));
    let o = sim(&["limits", "--preset", "formamide"]);
    assert!(stdout(&o).contains("factor 10.218"));
}

#[test]
fn run_writes_trace_gates_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = sim(&["run", "--preset", "glycine", "--cycles", "10", "--reset-delay", "3.14", "--gate-trace", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 12);
    let gates = fs::read_to_string(dir.path().join("gates_cycle_001.csv")).unwrap();
    assert_eq!(gates.lines().count(), 9);
    assert!(dir.path().join("gates_cycle_010.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["protocol"]["cycles"], 10);
    assert_eq!(manifest["system"]["name"], "glycine");
}

#[test]
fn zero_cycles_gives_thermal_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["run", "--preset", "formamide", "--cycles", "0", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("after 0 cycles"));
    assert_eq!(fs::read_to_string(dir.path().join("trace.csv")).unwrap().lines().count(), 2);
}

#[test]
fn two_point_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["sweep", "--preset", "glycine", "--steps", "2", "--cycles", "5", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(stdout(&o).contains("argmax"));
}

#[test]
fn bad_inputs_exit_nonzero() {
    assert!(!sim(&["limits", "--preset", "benzene"]).status.success());
    assert!(!sim(&["sweep", "--preset", "glycine", "--from", "3", "--to", "1"]).status.success());
    assert!(!sim(&["run", "--preset", "glycine", "--reset-repeats", "0", "--out", "/nonexistent/x"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name":"x","spins":[]}"#).unwrap();
    let o = sim(&["limits", "--system", bad.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn presets_dump_round_trips_through_system_flag() {
    let o = sim(&["presets", "dump", "glycine"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("glycine.json");
    fs::write(&path, stdout(&o)).unwrap();
    let a = sim(&["limits", "--system", path.to_str().unwrap()]);
    let b = sim(&["limits", "--preset", "glycine"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&sim(&["presets", "list"])).contains("formamide"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = sim(&["run", "--preset", "formamide", "--gate-trace", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success());
    }
    for name in ["trace.csv", "gates_cycle_003.csv", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
