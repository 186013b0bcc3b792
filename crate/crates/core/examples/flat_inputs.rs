//! The flat map from (y, ẏ, ÿ) to the input u, checked against the forward
//! dynamics it inverts.

use nalgebra::DVector;
use pcc_flat::dynamics::{coriolis, forward_dynamics, inertia, inertia_projected};
use pcc_flat::{flat_input, flat_state, FlatOutputPoint, RobotParams};

fn main() -> pcc_flat::Result<()> {
    let params = RobotParams::two_segment();
    let v = |a: f64, b: f64| DVector::from_column_slice(&[a, b]);

    let point = FlatOutputPoint::new(v(0.9, -0.4), v(0.5, 1.2), v(-3.0, 2.0))?;
    let u = flat_input(&point, &params)?;
    let state = flat_state(&point);
    let q_ddot = forward_dynamics(&state, &u, &params)?;

    println!("B(q)        = {:.6e}", inertia(&state.q, &params)?);
    println!("J_mᵀ B_ξ J_m = {:.6e}", inertia_projected(&state.q, &params)?);
    println!("C(q, q̇)     = {:.6e}", coriolis(&state.q, &state.q_dot, &params)?);
    println!("u = {:+.6?}", u.as_slice());
    println!("forward dynamics recovers ÿ = {:+.9?}", q_ddot.as_slice());
    println!("round-trip error {:.2e}", (q_ddot - &point.y_ddot).amax());

    let hold = flat_input(&FlatOutputPoint::at_rest(v(0.6, 0.3))?, &params)?;
    println!("static hold at (0.6, 0.3): u = K q = {:+.3?}", hold.as_slice());
    Ok(())
}
