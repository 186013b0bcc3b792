//! Tip-position inverse kinematics for the two-segment robot.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{tip_jacobian, tip_position};
use crate::params::RobotParams;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;
/// Smallest line-search fraction tried before a step is taken regardless.
pub const MIN_STEP_FRACTION: f64 = 1.0 / 64.0;
/// `|det J| / ‖J‖_F²` below this is treated as a singular pose.
pub const SINGULARITY_THRESHOLD: f64 = 1e-10;

/// Which way the arm curls; picks the IK solution family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConcavityBranch {
    Counterclockwise,
    Clockwise,
}

impl ConcavityBranch {
    pub fn name(self) -> &'static str {
        match self {
            ConcavityBranch::Counterclockwise => "counterclockwise",
            ConcavityBranch::Clockwise => "clockwise",
        }
    }
}

/// Initial guess that selects a branch.
pub fn seed_for_branch(branch: ConcavityBranch) -> DVector<f64> {
    let s = match branch {
        ConcavityBranch::Counterclockwise => FRAC_PI_2,
        ConcavityBranch::Clockwise => -FRAC_PI_2,
    };
    DVector::from_element(2, s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IkProblem {
    pub target: Vector2<f64>,
    pub seed: DVector<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl IkProblem {
    pub fn new(target: Vector2<f64>, seed: DVector<f64>) -> Self {
        Self {
            target,
            seed,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "IK tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidSpec("IK needs at least one iteration".into()));
        }
        if !(self.target.iter().all(|v| v.is_finite())) {
            return Err(Error::NonFinite("IK target"));
        }
        if !(self.seed.iter().all(|v| v.is_finite())) {
            return Err(Error::NonFinite("IK seed"));
        }
        Ok(())
    }
}

/// `d(q) = r_target − r(q)`.
pub fn tip_residual(q: &DVector<f64>, target: &Vector2<f64>, params: &RobotParams) -> Result<Vector2<f64>> {
    Ok(target - tip_position(q, params)?)
}

/// Damped Newton solve of `d(q) = 0`, warm-started from `problem.seed`.
pub fn solve_ik(problem: &IkProblem, params: &RobotParams) -> Result<DVector<f64>> {
    problem.validate()?;
    if params.segments() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: params.segments(),
        });
    }
    params.check_dim(problem.seed.len())?;

    let overshoot = problem.target.norm() - params.reach();
    if overshoot > 0.0 {
        return Err(Error::Unreachable { residual: overshoot });
    }

    let mut q = problem.seed.clone();
    let mut d = tip_residual(&q, &problem.target, params)?;
    let mut norm = d.norm();
    let mut best = norm;
    for _ in 0..problem.max_iterations {
        if norm <= problem.tolerance {
            return Ok(q);
        }
        let j = tip_jacobian(&q, params)?;
        let j = Matrix2::new(j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]);
        let det = j.determinant();
        if det.abs() <= SINGULARITY_THRESHOLD * j.norm_squared() {
            return Err(Error::KinematicSingularity {
                q: q.iter().copied().collect(),
            });
        }
        // Cramer's rule on the 2x2 system J step = d
        let step = DVector::from_column_slice(&[
            (j[(1, 1)] * d.x - j[(0, 1)] * d.y) / det,
            (j[(0, 0)] * d.y - j[(1, 0)] * d.x) / det,
        ]);

        let mut alpha = 1.0;
        loop {
            let candidate = &q + &step * alpha;
            let cd = tip_residual(&candidate, &problem.target, params)?;
            let cn = cd.norm();
            if cn < norm || alpha <= MIN_STEP_FRACTION {
                q = candidate;
                d = cd;
                norm = cn;
                break;
            }
            alpha *= 0.5;
        }
        best = best.min(norm);
    }
    if norm <= problem.tolerance {
        Ok(q)
    } else {
        Err(Error::Unreachable { residual: best })
    }
}
