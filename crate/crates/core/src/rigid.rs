//! The constrained RPPR rigid robot that mimics each constant-curvature
//! segment: joint map `ξ = m(q)`, its Jacobian and time derivative, and the
//! lumped mass points the dynamics are built from.
//!
//! Each segment becomes revolute `q/2`, two prismatic joints of
//! `L sin(q/2)/q` along the chord, and revolute `q/2`. The segment mass sits
//! between the two prismatic joints, at the chord midpoint.

use nalgebra::{DMatrix, DVector, Matrix2xX, Vector2};

use crate::arc::{half_sinc, half_sinc_d1, half_sinc_d2};
use crate::error::{Error, Result};
use crate::kinematics::{
    chain_point, chain_point_hessian, chain_point_jacobian, check_finite, PlanarTransform,
};
use crate::params::RobotParams;

/// Rigid joints per segment.
pub const JOINTS_PER_SEGMENT: usize = 4;

/// Joint-space configuration of the rigid equivalent, with rates when lifted.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidConfiguration {
    pub xi: DVector<f64>,
    pub xi_dot: Option<DVector<f64>>,
    pub xi_ddot: Option<DVector<f64>>,
}

impl RigidConfiguration {
    pub fn segments(&self) -> usize {
        self.xi.len() / JOINTS_PER_SEGMENT
    }

    /// The four joints `[θ_a, d_1, d_2, θ_b]` of one segment.
    pub fn segment_joints(&self, i: usize) -> [f64; 4] {
        let b = i * JOINTS_PER_SEGMENT;
        [self.xi[b], self.xi[b + 1], self.xi[b + 2], self.xi[b + 3]]
    }
}

fn prepare(q: &DVector<f64>, params: &RobotParams) -> Result<()> {
    params.check_dim(q.len())?;
    check_finite(q)
}

/// `ξ = m(q)`.
pub fn m_of_q(q: &DVector<f64>, params: &RobotParams) -> Result<RigidConfiguration> {
    prepare(q, params)?;
    let mut xi = DVector::zeros(JOINTS_PER_SEGMENT * q.len());
    for (i, (&qi, &li)) in q.iter().zip(params.lengths()).enumerate() {
        let d = li * half_sinc(qi);
        xi.fixed_rows_mut::<4>(JOINTS_PER_SEGMENT * i)
            .copy_from_slice(&[0.5 * qi, d, d, 0.5 * qi]);
    }
    Ok(RigidConfiguration {
        xi,
        xi_dot: None,
        xi_ddot: None,
    })
}

/// `J_m(q) = ∂m/∂q`, block diagonal with blocks `[1/2, L_m, L_m, 1/2]ᵀ`.
pub fn jm(q: &DVector<f64>, params: &RobotParams) -> Result<DMatrix<f64>> {
    prepare(q, params)?;
    Ok(block_column(q, params, |qi, li| (0.5, li * half_sinc_d1(qi))))
}

/// `J̇_m(q, q̇)`.
pub fn jm_dot(q: &DVector<f64>, q_dot: &DVector<f64>, params: &RobotParams) -> Result<DMatrix<f64>> {
    prepare(q, params)?;
    params.check_dim(q_dot.len())?;
    if q_dot.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("curvature rate"));
    }
    let mut out = block_column(q, params, |qi, li| (0.0, li * half_sinc_d2(qi)));
    for i in 0..q.len() {
        let rows = JOINTS_PER_SEGMENT * i;
        out.view_mut((rows, i), (JOINTS_PER_SEGMENT, 1)).scale_mut(q_dot[i]);
    }
    Ok(out)
}

/// `ξ, ξ̇ = J_m q̇, ξ̈ = J̇_m q̇ + J_m q̈`.
pub fn lift(
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    q_ddot: &DVector<f64>,
    params: &RobotParams,
) -> Result<RigidConfiguration> {
    params.check_dim(q_ddot.len())?;
    let mut cfg = m_of_q(q, params)?;
    let j = jm(q, params)?;
    let jd = jm_dot(q, q_dot, params)?;
    cfg.xi_dot = Some(&j * q_dot);
    cfg.xi_ddot = Some(&jd * q_dot + &j * q_ddot);
    Ok(cfg)
}

fn block_column(
    q: &DVector<f64>,
    params: &RobotParams,
    entries: impl Fn(f64, f64) -> (f64, f64),
) -> DMatrix<f64> {
    let n = q.len();
    let mut out = DMatrix::zeros(JOINTS_PER_SEGMENT * n, n);
    for (i, (&qi, &li)) in q.iter().zip(params.lengths()).enumerate() {
        let (rot_entry, slide_entry) = entries(qi, li);
        let r = JOINTS_PER_SEGMENT * i;
        out[(r, i)] = rot_entry;
        out[(r + 1, i)] = slide_entry;
        out[(r + 2, i)] = slide_entry;
        out[(r + 3, i)] = rot_entry;
    }
    out
}

fn check_segment(segment: usize, params: &RobotParams) -> Result<()> {
    if segment < params.segments() {
        Ok(())
    } else {
        Err(Error::SegmentOutOfRange {
            index: segment,
            segments: params.segments(),
        })
    }
}

/// World position of a segment's lumped mass (zero-based `segment`).
pub fn mass_point_position(
    q: &DVector<f64>,
    segment: usize,
    params: &RobotParams,
) -> Result<Vector2<f64>> {
    check_segment(segment, params)?;
    prepare(q, params)?;
    Ok(chain_point(q.as_slice(), params.lengths(), segment, 0.5))
}

/// `∂μ_i/∂q`; columns beyond `segment` are zero.
pub fn mass_point_jacobian(
    q: &DVector<f64>,
    segment: usize,
    params: &RobotParams,
) -> Result<Matrix2xX<f64>> {
    check_segment(segment, params)?;
    prepare(q, params)?;
    Ok(chain_point_jacobian(q.as_slice(), params.lengths(), segment, 0.5))
}

pub(crate) fn mass_point_hessian(q: &[f64], segment: usize, lengths: &[f64]) -> Vec<Vector2<f64>> {
    chain_point_hessian(q, lengths, segment, 0.5)
}

/// Forward kinematics of the rigid RPPR chain, returning the frame after
/// every joint (`4n` frames, base excluded).
pub fn rigid_chain_frames(xi: &DVector<f64>) -> Vec<PlanarTransform> {
    let mut frames = Vec::with_capacity(xi.len());
    let mut current = PlanarTransform::identity();
    for (j, &v) in xi.iter().enumerate() {
        let joint = match j % JOINTS_PER_SEGMENT {
            0 | 3 => PlanarTransform::rotation(v),
            _ => PlanarTransform::translation(v, 0.0),
        };
        current = current * joint;
        frames.push(current);
    }
    frames
}

/// Tip frame of the rigid RPPR chain.
pub fn rigid_chain_transform(xi: &DVector<f64>) -> PlanarTransform {
    rigid_chain_frames(xi)
        .last()
        .copied()
        .unwrap_or_else(PlanarTransform::identity)
}

/// Index of the joint whose output frame carries segment `i`'s mass.
fn mass_joint(segment: usize) -> usize {
    JOINTS_PER_SEGMENT * segment + 1
}

/// Geometric Jacobian `∂μ_i/∂ξ` of a mass point in the rigid chain,
/// built from joint axes rather than from the arc formulas.
pub fn rigid_mass_point_jacobian(xi: &DVector<f64>, segment: usize) -> Matrix2xX<f64> {
    let frames = rigid_chain_frames(xi);
    let target = mass_joint(segment);
    let point = frames[target].translation;
    let mut jac = Matrix2xX::zeros(xi.len());
    for j in 0..=target {
        let before = if j == 0 {
            PlanarTransform::identity()
        } else {
            frames[j - 1]
        };
        let col = match j % JOINTS_PER_SEGMENT {
            0 | 3 => {
                let arm = point - before.translation;
                Vector2::new(-arm.y, arm.x)
            }
            _ => before.rotation.column(0).into_owned(),
        };
        jac.set_column(j, &col);
    }
    jac
}

/// Joint-space inertia `B_ξ(ξ)` of the rigid chain with point masses.
pub fn rigid_inertia(xi: &DVector<f64>, masses: &[f64]) -> DMatrix<f64> {
    let dim = xi.len();
    let mut b = DMatrix::zeros(dim, dim);
    for (i, &m) in masses.iter().enumerate() {
        let j = rigid_mass_point_jacobian(xi, i);
        b += m * j.transpose() * j;
    }
    b
}

/// Heading of segment `i`'s chord, used to orient the mass point frame.
pub fn chord_heading(q: &DVector<f64>, segment: usize) -> f64 {
    q.iter().take(segment).sum::<f64>() + 0.5 * q[segment]
}
