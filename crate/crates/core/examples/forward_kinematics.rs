//! Tip position, tip Jacobian and the equivalent rigid RPPR chain for a few
//! curvature pairs.

use nalgebra::DVector;
use pcc_flat::kinematics::{chain_transform, segment_transform};
use pcc_flat::rigid::{m_of_q, mass_point_position, rigid_chain_transform};
use pcc_flat::{tip_jacobian, tip_position, RobotParams};

fn main() -> pcc_flat::Result<()> {
    let params = RobotParams::two_segment();

    let one = segment_transform(std::f64::consts::FRAC_PI_2, 0.128)?;
    println!("quarter-circle segment ends at {:.5?}, heading {:.4} rad", one.translation.as_slice(), one.angle());

    for q in [[0.0, 0.0], [1e-6, -1e-6], [0.8, 0.6], [1.5, -1.2], [-2.0, 2.5]] {
        let q = DVector::from_column_slice(&q);
        let tip = tip_position(&q, &params)?;
        let jac = tip_jacobian(&q, &params)?;
        let frame = chain_transform(&q, &params)?;
        let rigid = rigid_chain_transform(&m_of_q(&q, &params)?.xi);
        println!(
            "q = {:>6.3?}  tip = ({:+.5}, {:+.5})  heading = {:+.4}  |det J| = {:.3e}  rigid gap = {:.1e}",
            q.as_slice(),
            tip.x,
            tip.y,
            frame.angle(),
            jac.fixed_columns::<2>(0).determinant().abs(),
            (rigid.translation - tip).norm(),
        );
        for i in 0..params.segments() {
            let mu = mass_point_position(&q, i, &params)?;
            println!("    mass {} at ({:+.5}, {:+.5})", i + 1, mu.x, mu.y);
        }
    }
    Ok(())
}
