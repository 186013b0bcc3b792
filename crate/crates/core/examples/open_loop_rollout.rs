//! Plays each planned input open loop through the dynamics and reports tip
//! tracking error for both input holds.

use std::path::Path;

use pcc_flat::io::{load_params, load_spec};
use pcc_flat::{generate, rollout_open_loop, Hold, RolloutOptions};

fn main() -> pcc_flat::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let params = load_params(&data.join("params.json"))?;

    for name in ["a", "b", "c"] {
        let spec = load_spec(&data.join(format!("trajectory_{name}.json")))?;
        let path = spec.to_path()?;
        let traj = generate(&path, spec.branch, &params)?;
        let x0 = pcc_flat::flat_state(&traj.flat_point(0));
        for hold in [Hold::Linear, Hold::ZeroOrder] {
            let options = RolloutOptions { hold, ..Default::default() };
            let r = rollout_open_loop(&traj, &x0, &path, &params, options)?;
            println!(
                "{name} {hold:?}: e_avg = {:.3e} m, max = {:.3e} m",
                r.e_avg,
                r.max_error()
            );
        }
    }
    Ok(())
}
