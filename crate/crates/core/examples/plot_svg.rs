//! Generates, simulates and plots trajectory A, writing three SVGs.
//!
//! Usage: `cargo run --example plot_svg [out_dir]`

use std::path::{Path, PathBuf};

use pcc_flat::bench::benchmark_sweep;
use pcc_flat::io::{load_params, load_spec, write_rollout_csv, write_timing_csv, write_trajectory_csv};
use pcc_flat::plot::{render_csv, PlotKind};
use pcc_flat::{generate, rollout_open_loop, RolloutOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let params = load_params(&data.join("params.json"))?;
    let spec = load_spec(&data.join("trajectory_a.json"))?;
    let path = spec.to_path()?;
    let traj = generate(&path, spec.branch, &params)?;
    let x0 = pcc_flat::flat_state(&traj.flat_point(0));
    let rollout = rollout_open_loop(&traj, &x0, &path, &params, RolloutOptions::default())?;
    let timing = benchmark_sweep(&spec, &params, 1e-4, 3e-3, 6)?;

    let mut csvs = [Vec::new(), Vec::new(), Vec::new()];
    write_trajectory_csv(&traj, &mut csvs[0])?;
    write_rollout_csv(&rollout, None, &mut csvs[1])?;
    write_timing_csv(&timing, &mut csvs[2])?;

    let kinds = [PlotKind::Trajectory, PlotKind::Rollout, PlotKind::Timing];
    for ((kind, csv), name) in kinds.into_iter().zip(&csvs).zip(["trajectory", "rollout", "timing"]) {
        let svg = render_csv(kind, std::str::from_utf8(csv)?)?;
        let out = out_dir.join(format!("{name}.svg"));
        std::fs::write(&out, svg)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}
