//! Damped Newton inverse kinematics: branch seeds, a mirrored target, the
//! S-shaped second solution, and the two failure modes.

use nalgebra::{DVector, Vector2};
use pcc_flat::ik::{seed_for_branch, tip_residual};
use pcc_flat::{solve_ik, tip_position, ConcavityBranch, IkProblem, RobotParams};

fn report(label: &str, problem: &IkProblem, params: &RobotParams) -> pcc_flat::Result<()> {
    match solve_ik(problem, params) {
        Ok(q) => {
            let r = tip_residual(&q, &problem.target, params)?.norm();
            println!("{label:>28}: q = {:+.8?}  residual {r:.2e} m", q.as_slice());
        }
        Err(e) => println!("{label:>28}: {e}"),
    }
    Ok(())
}

fn main() -> pcc_flat::Result<()> {
    let params = RobotParams::two_segment();
    let target = tip_position(&DVector::from_column_slice(&[0.9, 0.7]), &params)?;
    let mirrored = Vector2::new(target.x, -target.y);
    println!("target ({:.5}, {:.5}), mirror ({:.5}, {:.5})", target.x, target.y, mirrored.x, mirrored.y);

    let ccw = seed_for_branch(ConcavityBranch::Counterclockwise);
    let cw = seed_for_branch(ConcavityBranch::Clockwise);
    report("counterclockwise seed", &IkProblem::new(target, ccw), &params)?;
    report("clockwise seed, mirror", &IkProblem::new(mirrored, cw.clone()), &params)?;
    // Both seeds can fall into the same basin; the branch is a seed, not a constraint.
    report("clockwise seed, same target", &IkProblem::new(target, cw), &params)?;
    let s_seed = DVector::from_column_slice(&[1.6, -1.5]);
    report("S-shaped seed", &IkProblem::new(target, s_seed), &params)?;

    let far = Vector2::new(0.3, 0.0);
    report("0.3 m target", &IkProblem::new(far, seed_for_branch(ConcavityBranch::Counterclockwise)), &params)?;
    report("straight seed", &IkProblem::new(Vector2::new(0.2, 0.05), DVector::zeros(2)), &params)?;
    println!("reach is {:.3} m", params.reach());
    Ok(())
}
