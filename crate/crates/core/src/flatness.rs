//! Flat-output map: with the curvatures as flat outputs, states and inputs
//! are algebraic in `(y, ẏ, ÿ)`. Nothing here differentiates; callers supply
//! the derivatives, exact or finite-differenced.

use nalgebra::DVector;

use crate::dynamics::DynamicsTerms;
use crate::error::{Error, Result};
use crate::kinematics::{ConfigurationState, WORKING_BOUND};
use crate::params::RobotParams;

/// One sample of the flat output and its first two derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatOutputPoint {
    pub y: DVector<f64>,
    pub y_dot: DVector<f64>,
    pub y_ddot: DVector<f64>,
}

impl FlatOutputPoint {
    pub fn new(y: DVector<f64>, y_dot: DVector<f64>, y_ddot: DVector<f64>) -> Result<Self> {
        let n = y.len();
        for len in [y_dot.len(), y_ddot.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        if y.iter().chain(y_dot.iter()).chain(y_ddot.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("flat output"));
        }
        if let Some(v) = y.iter().find(|v| v.abs() > WORKING_BOUND) {
            return Err(Error::OutOfWorkingBound {
                value: *v,
                bound: WORKING_BOUND,
            });
        }
        Ok(Self { y, y_dot, y_ddot })
    }

    pub fn at_rest(y: DVector<f64>) -> Result<Self> {
        let n = y.len();
        Self::new(y, DVector::zeros(n), DVector::zeros(n))
    }
}

/// `x = [y; ẏ]`.
pub fn flat_state(p: &FlatOutputPoint) -> ConfigurationState {
    ConfigurationState {
        q: p.y.clone(),
        q_dot: p.y_dot.clone(),
    }
}

/// `u = (J_λᵀ)⁻¹ (B(y) ÿ + C(y, ẏ) ẏ + K y + D ẏ)`.
pub fn flat_input(p: &FlatOutputPoint, params: &RobotParams) -> Result<DVector<f64>> {
    params.check_dim(p.y.len())?;
    let gain = params.input_gain();
    if gain.iter().any(|g| *g == 0.0) {
        return Err(Error::SingularInputGain);
    }
    let terms = DynamicsTerms::evaluate(&p.y, &p.y_dot, params)?;
    let torque = &terms.inertia * &p.y_ddot
        + &terms.coriolis * &p.y_dot
        + params.stiffness() * &p.y
        + params.damping() * &p.y_dot;
    Ok(torque.component_div(gain))
}
