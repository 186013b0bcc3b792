//! Sweeps the planning timestep and compares per-iteration cost with the
//! real-time budget `dt`.

use std::path::Path;

use pcc_flat::bench::{benchmark_sweep, crossover, flatness_cv, time_generation};
use pcc_flat::io::{load_params, load_spec};

fn main() -> pcc_flat::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let params = load_params(&data.join("params.json"))?;
    let spec = load_spec(&data.join("trajectory_a.json"))?;

    let points = benchmark_sweep(&spec, &params, 1e-4, 3e-3, 8)?;
    println!("{:>12} {:>12} {:>10}", "dt [s]", "t_avg [s]", "speedup");
    for p in &points {
        println!("{:>12.4e} {:>12.3e} {:>10.1}", p.dt, p.t_avg, p.speedup);
    }
    println!("t_avg coefficient of variation: {:.1}%", 100.0 * flatness_cv(&points));
    println!("crossover: {:?}", crossover(&points));

    let (_, nominal) = time_generation(&spec, &params)?;
    println!("at dt = 0.01: {}", nominal.summary());
    Ok(())
}
