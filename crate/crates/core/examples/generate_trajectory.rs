//! Plans the three bundled tip paths and writes each as CSV.
//!
//! Usage: `cargo run --example generate_trajectory [out_dir]`

use std::path::{Path, PathBuf};

use pcc_flat::bench::time_generation;
use pcc_flat::io::{create, load_params, load_spec, write_trajectory_csv};

fn main() -> pcc_flat::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let params = load_params(&data.join("params.json"))?;

    for name in ["a", "b", "c"] {
        let spec = load_spec(&data.join(format!("trajectory_{name}.json")))?;
        let (traj, timing) = time_generation(&spec, &params)?;
        let peak_u = traj.u.iter().map(|u| u.amax()).fold(0.0, f64::max);
        let out = out_dir.join(format!("trajectory_{name}.csv"));
        write_trajectory_csv(&traj, create(&out)?)?;
        println!(
            "{:<16} {} samples, max |u| = {:.3}, {}  -> {}",
            spec.name.as_deref().unwrap_or(name),
            traj.len(),
            peak_u,
            timing.summary(),
            out.display()
        );
    }
    Ok(())
}
