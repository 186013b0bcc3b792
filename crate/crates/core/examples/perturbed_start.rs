//! Starts the arm away from the planned initial curvature and watches the
//! open-loop tip error decay.

use std::path::Path;

use nalgebra::DVector;
use pcc_flat::io::{load_params, load_spec};
use pcc_flat::simulation::perturbed_start;
use pcc_flat::{generate, rollout_open_loop, RolloutOptions};

fn main() -> pcc_flat::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let params = load_params(&data.join("params.json"))?;
    let spec = load_spec(&data.join("trajectory_b.json"))?;
    let path = spec.to_path()?;
    let traj = generate(&path, spec.branch, &params)?;

    for offset in [[0.1, 0.1], [-0.3, 0.2], [0.3, -0.3]] {
        let x0 = perturbed_start(&traj, &DVector::from_column_slice(&offset))?;
        let r = rollout_open_loop(&traj, &x0, &path, &params, RolloutOptions::default())?;
        let at = |t: f64| r.tip_errors[(t / path.dt()).round() as usize];
        println!(
            "offset {offset:+.1?}: e(0) = {:.2e}  e(0.1) = {:.2e}  e(0.5) = {:.2e}  e(2) = {:.2e}  below 1 cm after {:?} s",
            at(0.0),
            at(0.1),
            at(0.5),
            at(2.0),
            r.settling_time(1e-2)
        );
    }
    Ok(())
}
