//! The `pcc-flat` binary: outputs, determinism and exit codes.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcc-flat")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generate_writes_1001_rows_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("1.csv"), dir.path().join("2.csv"));
    for out in [&first, &second] {
        let o = run(&["generate", "--spec", s(&data("trajectory_a.json")), "--params", s(&data("params.json")), "--out", s(out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&first).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,q1,q2,qd1,qd2,qdd1,qdd2,u1,u2");
    assert_eq!(text.lines().count(), 1002);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn simulate_generate_plot_chain() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let roll = dir.path().join("roll.csv");
    let svg = dir.path().join("roll.svg");
    let spec = data("trajectory_b.json");
    assert_eq!(code(&run(&["generate", "--spec", s(&spec), "--out", s(&traj)])), 0);
    let o = run(&["simulate", "--spec", s(&spec), "--traj", s(&traj), "--out", s(&roll), "--hold", "zoh"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("e_avg="));
    let text = std::fs::read_to_string(&roll).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,q1,q2,qd1,qd2,rx,ry,rx_ref,ry_ref,err");
    assert_eq!(text.lines().count(), 1002);
    assert_eq!(code(&run(&["plot", "--kind", "rollout", "--csv", s(&roll), "--out", s(&svg)])), 0);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"id="simulated""#));
}

#[test]
fn zero_input_adds_a_decreasing_energy_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    let o = run(&["simulate", "--spec", s(&data("trajectory_c.json")), "--out", s(&out), "--zero-input", "--perturb", "-0.25"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = pcc_flat::io::Table::read_path(&out).unwrap();
    let e = table.column("energy").unwrap();
    assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-8 * e[0]));
    assert!(e[e.len() - 1] < e[0]);
}

#[test]
fn benchmark_and_timing_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let svg = dir.path().join("t.svg");
    let o = run(&[
        "benchmark", "--spec", s(&data("trajectory_a.json")), "--out", s(&out),
        "--dt-min", "0.001", "--dt-max", "0.004", "--steps", "3",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let points = pcc_flat::io::read_timing_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(points.len(), 3);
    assert!(points.iter().all(|p| p.t_avg > 0.0 && (p.speedup - p.dt / p.t_avg).abs() < 1e-9 * p.speedup));
    assert_eq!(code(&run(&["plot", "--kind", "timing", "--csv", s(&out), "--out", s(&svg)])), 0);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.contains(r#"id="t_avg""#) && svg.contains(r#"id="realtime""#));
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let bad_params = dir.path().join("params.json");
    std::fs::write(&bad_params, r#"{"lengths":[0.1,-0.1],"masses":[1,1],"K":[[1,0],[0,1]],"D":[[1,0],[0,1]]}"#).unwrap();
    let spec = data("trajectory_a.json");
    let cases: [Vec<&str>; 7] = [
        vec!["generate", "--spec", s(&broken), "--out", s(&out)],
        vec!["generate", "--spec", "/does/not/exist.json", "--out", s(&out)],
        vec!["generate", "--spec", s(&spec), "--params", s(&bad_params), "--out", s(&out)],
        vec!["simulate", "--spec", s(&spec), "--out", s(&out), "--hold", "cubic"],
        vec!["plot", "--kind", "histogram", "--csv", s(&empty), "--out", s(&out)],
        vec!["plot", "--kind", "trajectory", "--csv", s(&empty), "--out", s(&out)],
        vec!["benchmark", "--spec", s(&spec), "--out", s(&out), "--dt-min", "0.01", "--dt-max", "0.001"],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unreachable_target_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("far.json");
    std::fs::write(
        &spec,
        r#"{"control_points":[[0.2,0.1],[0.4,0.0]],"branch":"counterclockwise","dt":0.01,"total_time":1.0}"#,
    )
    .unwrap();
    let o = run(&["generate", "--spec", s(&spec), "--out", s(&dir.path().join("o.csv"))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unreachable"));
}
