use std::path::Path;
use std::process::{Command, Output};

use eulertop::io::{read_rows, PhaseRow, StroboscopicRow, TrajectoryRow};

fn eulertop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulertop"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn recipe_names(dir: &Path) -> Vec<String> {
    let out = eulertop(dir, &["recipes"]);
    assert!(out.status.success());
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect()
}

#[test]
fn recipes_are_all_listed() {
    let dir = tempfile::tempdir().unwrap();
    let names = recipe_names(dir.path());
    for want in [
        "twist-turn-sweep", "middle-rotor-sweep",
        "lmg-sweep-a", "lmg-sweep-b", "lmg-sweep-c",
        "lmg-spectrum-a", "lmg-spectrum-b", "lmg-spectrum-c",
        "tilted-sweep-a", "tilted-sweep-b", "tilted-sweep-c",
        "tilted-spectrum-a", "tilted-spectrum-b", "tilted-spectrum-c",
        "density-singularities", "reshaping-plate",
    ] {
        assert!(names.iter().any(|n| n == want), "{want} missing");
    }
    let out = eulertop(dir.path(), &["recipes", "--show", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_recipe_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in recipe_names(dir.path()) {
        let out = eulertop(dir.path(), &["recipes", "--show", &name]);
        write(dir.path(), &format!("{name}.json"), &String::from_utf8(out.stdout).unwrap());
        let out = eulertop(dir.path(), &["run", &format!("{name}.json")]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("{name}_meta.json"))).unwrap())
                .unwrap();
        assert_eq!(meta["config"]["kind"].as_str().is_some(), true);
        for p in meta["outputs"].as_array().unwrap() {
            assert!(dir.path().join(p.as_str().unwrap()).exists());
        }
    }
}

#[test]
fn lmg_sweep_reports_two_criticals() {
    let dir = tempfile::tempdir().unwrap();
    let out = eulertop(dir.path(), &["recipes", "--show", "lmg-sweep-a"]);
    write(dir.path(), "s.json", &String::from_utf8(out.stdout).unwrap());
    assert!(eulertop(dir.path(), &["run", "s.json", "--out", "x"]).status.success());
    let crit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("x_criticals.json")).unwrap()).unwrap();
    let c: Vec<f64> = crit["criticals"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(c.len(), 2);
    assert!((c[0] - 2.0).abs() < 1e-6 && (c[1] - 4.0).abs() < 1e-6);
    let zones: Vec<&str> = crit["intervals"].as_array().unwrap().iter().map(|v| v["zone"].as_str().unwrap()).collect();
    assert_eq!(zones, ["IV", "II", "I"]);
    let rows: Vec<PhaseRow> = read_rows(std::fs::File::open(dir.path().join("x_phase.csv")).unwrap()).unwrap();
    assert!(!rows.is_empty());
}

#[test]
fn simulation_conserves_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sim.json",
        r#"{"kind": "simulate", "inertia": {"i1": 1, "i2": 1, "i3": 2, "k3": 0.3},
            "initial": [0.3, 0.1, 2.0], "dt": 0.001, "steps": 5000}"#,
    );
    for prefix in ["a", "b"] {
        assert!(eulertop(dir.path(), &["run", "sim.json", "--out", prefix]).status.success());
    }
    let a = std::fs::read(dir.path().join("a_trajectory.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b_trajectory.csv")).unwrap());
    let rows: Vec<TrajectoryRow> = read_rows(a.as_slice()).unwrap();
    assert_eq!(rows.len(), 5001);
    let (e0, j0) = (rows[0].e_body, rows[0].j_sq);
    for r in &rows {
        assert!((r.e_body - e0).abs() < 1e-10 * e0 && (r.j_sq - j0).abs() < 1e-10 * j0);
    }
}

#[test]
fn regular_floquet_run_alternates() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "f.json",
        r#"{"kind": "floquet", "plate": {"i0": 1, "k3": 1}, "initial": [1.2, 0.02, 1.98],
            "tau0": 42.5, "periods": 50, "record_stride": 1000}"#,
    );
    assert!(eulertop(dir.path(), &["run", "f.json"]).status.success());
    let rows: Vec<StroboscopicRow> =
        read_rows(std::fs::File::open(dir.path().join("f_stroboscopic.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 51);
    assert!(rows.windows(2).all(|w| w[0].j1 * w[1].j1 < 0.0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("f_floquet.json")).unwrap()).unwrap();
    assert_eq!(summary["period_multiple"], 2);
    assert_eq!(summary["escaped"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = eulertop(dir.path(), &["run", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));

    write(dir.path(), "bad.json", "{\n  \"kind\": \"sweep\",\n  \"chi\": [1, 2, 3]\n}\n");
    let out = eulertop(dir.path(), &["run", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json:3:"));

    write(dir.path(), "nosteps.json", r#"{"kind": "simulate", "inertia": {"i1": 1, "i2": 2, "i3": 3}, "initial": [1, 0, 0], "dt": 0.1}"#);
    let out = eulertop(dir.path(), &["run", "nosteps.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("steps"));

    write(
        dir.path(),
        "blowup.json",
        r#"{"kind": "simulate", "inertia": {"i1": 1, "i2": 3, "i3": 2}, "initial": [1, 2, 2], "dt": 50, "steps": 10000}"#,
    );
    let out = eulertop(dir.path(), &["run", "blowup.json"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
