//! Closed-form planar PCC forward kinematics.

use std::ops::Mul;

use nalgebra::{DVector, Matrix2, Matrix2xX, Vector2};

use crate::arc::{self, sinc, sinc_d1, sinc_d2, versinc, versinc_d1, versinc_d2};
use crate::error::{Error, Result};
use crate::params::RobotParams;

/// Default bound on `|q_i|`: one full turn per segment.
pub const WORKING_BOUND: f64 = std::f64::consts::TAU;

/// Homogeneous transform in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarTransform {
    pub rotation: Matrix2<f64>,
    pub translation: Vector2<f64>,
}

impl PlanarTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix2::identity(),
            translation: Vector2::zeros(),
        }
    }

    pub fn rotation(angle: f64) -> Self {
        Self {
            rotation: rot(angle),
            translation: Vector2::zeros(),
        }
    }

    pub fn translation(x: f64, y: f64) -> Self {
        Self {
            rotation: Matrix2::identity(),
            translation: Vector2::new(x, y),
        }
    }

    /// Heading of the frame's x axis, in radians.
    pub fn angle(&self) -> f64 {
        self.rotation[(1, 0)].atan2(self.rotation[(0, 0)])
    }
}

impl Mul for PlanarTransform {
    type Output = PlanarTransform;

    fn mul(self, rhs: PlanarTransform) -> PlanarTransform {
        PlanarTransform {
            rotation: self.rotation * rhs.rotation,
            translation: self.translation + self.rotation * rhs.translation,
        }
    }
}

/// Curvatures `q` and their rates: the full state of the flat system.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigurationState {
    pub q: DVector<f64>,
    pub q_dot: DVector<f64>,
}

impl ConfigurationState {
    pub fn new(q: DVector<f64>, q_dot: DVector<f64>) -> Result<Self> {
        Self::with_bound(q, q_dot, WORKING_BOUND)
    }

    pub fn with_bound(q: DVector<f64>, q_dot: DVector<f64>, bound: f64) -> Result<Self> {
        if q.len() != q_dot.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: q_dot.len(),
            });
        }
        if q.iter().chain(q_dot.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("configuration state"));
        }
        if let Some(v) = q.iter().find(|v| v.abs() > bound) {
            return Err(Error::OutOfWorkingBound { value: *v, bound });
        }
        Ok(Self { q, q_dot })
    }

    pub fn at_rest(q: DVector<f64>) -> Result<Self> {
        let n = q.len();
        Self::new(q, DVector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }
}

#[inline]
pub(crate) fn rot(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Quarter-turn applied to a vector: `d R(θ)/dθ = S R(θ)`.
#[inline]
fn perp(v: Vector2<f64>) -> Vector2<f64> {
    Vector2::new(-v.y, v.x)
}

/// Transform from a segment's base frame to its tip frame.
pub fn segment_transform(q: f64, length: f64) -> Result<PlanarTransform> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidParams(format!("segment length {length} must be positive")));
    }
    Ok(PlanarTransform {
        rotation: rot(q),
        translation: Vector2::new(length * arc::arc_sinc(q)?, length * arc::arc_versinc(q)?),
    })
}

/// Base-to-tip composition of every segment transform.
pub fn chain_transform(q: &DVector<f64>, params: &RobotParams) -> Result<PlanarTransform> {
    params.check_dim(q.len())?;
    q.iter()
        .zip(params.lengths())
        .try_fold(PlanarTransform::identity(), |acc, (&qi, &li)| {
            Ok(acc * segment_transform(qi, li)?)
        })
}

/// Tip position. Uses the two-segment closed form when `n = 2`.
pub fn tip_position(q: &DVector<f64>, params: &RobotParams) -> Result<Vector2<f64>> {
    params.check_dim(q.len())?;
    check_finite(q)?;
    if params.segments() == 2 {
        Ok(tip_two_segment(q[0], q[1], params.lengths()))
    } else {
        Ok(chain_point(q.as_slice(), params.lengths(), params.segments() - 1, 1.0))
    }
}

/// `∂r/∂q`, exact and guarded at zero curvature.
pub fn tip_jacobian(q: &DVector<f64>, params: &RobotParams) -> Result<Matrix2xX<f64>> {
    params.check_dim(q.len())?;
    check_finite(q)?;
    if params.segments() == 2 {
        Ok(tip_jacobian_two_segment(q[0], q[1], params.lengths()))
    } else {
        Ok(chain_point_jacobian(q.as_slice(), params.lengths(), params.segments() - 1, 1.0))
    }
}

pub(crate) fn check_finite(q: &DVector<f64>) -> Result<()> {
    if q.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("curvature vector"))
    }
}

#[inline]
pub(crate) fn tip_two_segment(q1: f64, q2: f64, lengths: &[f64]) -> Vector2<f64> {
    let (l1, l2) = (lengths[0], lengths[1]);
    let (s1, c1) = q1.sin_cos();
    let (a2, b2) = (sinc(q2), versinc(q2));
    Vector2::new(
        l1 * sinc(q1) + l2 * (c1 * a2 - s1 * b2),
        l1 * versinc(q1) + l2 * (s1 * a2 + c1 * b2),
    )
}

#[inline]
pub(crate) fn tip_jacobian_two_segment(q1: f64, q2: f64, lengths: &[f64]) -> Matrix2xX<f64> {
    let (l1, l2) = (lengths[0], lengths[1]);
    let (s1, c1) = q1.sin_cos();
    let (a2, b2) = (sinc(q2), versinc(q2));
    let (da2, db2) = (sinc_d1(q2), versinc_d1(q2));
    Matrix2xX::from_column_slice(&[
        l1 * sinc_d1(q1) - l2 * (s1 * a2 + c1 * b2),
        l1 * versinc_d1(q1) + l2 * (c1 * a2 - s1 * b2),
        l2 * (c1 * da2 - s1 * db2),
        l2 * (s1 * da2 + c1 * db2),
    ])
}

// A chain point sits a `fraction` of the way along the chord-scaled arc
// vector of `segment`, after every earlier segment. The tip is
// (n - 1, 1.0); a segment's lumped mass is (i, 0.5).

struct ChainTerms {
    /// World-frame contribution of each segment up to `segment`.
    w: Vec<Vector2<f64>>,
    /// First and second derivative of each contribution w.r.t. its own q.
    dw: Vec<Vector2<f64>>,
    ddw: Vec<Vector2<f64>>,
}

fn chain_terms(q: &[f64], lengths: &[f64], segment: usize, fraction: f64, order: u8) -> ChainTerms {
    let mut w = Vec::with_capacity(segment + 1);
    let mut dw = Vec::with_capacity(if order >= 1 { segment + 1 } else { 0 });
    let mut ddw = Vec::with_capacity(if order >= 2 { segment + 1 } else { 0 });
    let mut heading = 0.0;
    for j in 0..=segment {
        let c = if j == segment { fraction } else { 1.0 };
        let r = rot(heading);
        let scale = c * lengths[j];
        let qj = q[j];
        w.push(r * Vector2::new(scale * sinc(qj), scale * versinc(qj)));
        if order >= 1 {
            dw.push(r * Vector2::new(scale * sinc_d1(qj), scale * versinc_d1(qj)));
        }
        if order >= 2 {
            ddw.push(r * Vector2::new(scale * sinc_d2(qj), scale * versinc_d2(qj)));
        }
        heading += qj;
    }
    ChainTerms { w, dw, ddw }
}

pub(crate) fn chain_point(q: &[f64], lengths: &[f64], segment: usize, fraction: f64) -> Vector2<f64> {
    chain_terms(q, lengths, segment, fraction, 0).w.iter().sum()
}

pub(crate) fn chain_point_jacobian(
    q: &[f64],
    lengths: &[f64],
    segment: usize,
    fraction: f64,
) -> Matrix2xX<f64> {
    let n = q.len();
    let t = chain_terms(q, lengths, segment, fraction, 1);
    let mut jac = Matrix2xX::zeros(n);
    // Suffix sums of w beyond each index.
    let mut tail = Vector2::zeros();
    for k in (0..=segment).rev() {
        jac.set_column(k, &(perp(tail) + t.dw[k]));
        tail += t.w[k];
    }
    jac
}

/// Second derivatives `∂²p/∂q_k∂q_l`, row-major `n × n`.
pub(crate) fn chain_point_hessian(
    q: &[f64],
    lengths: &[f64],
    segment: usize,
    fraction: f64,
) -> Vec<Vector2<f64>> {
    let n = q.len();
    let t = chain_terms(q, lengths, segment, fraction, 2);
    let mut hess = vec![Vector2::zeros(); n * n];
    // tails[l] = sum of w_j for l < j <= segment
    let mut tails = vec![Vector2::zeros(); segment + 1];
    let mut acc = Vector2::zeros();
    for l in (0..=segment).rev() {
        tails[l] = acc;
        acc += t.w[l];
    }
    for l in 0..=segment {
        hess[l * n + l] = t.ddw[l] - tails[l];
        let off = perp(t.dw[l]) - tails[l];
        for k in 0..l {
            hess[k * n + l] = off;
            hess[l * n + k] = off;
        }
    }
    hess
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn assert_orthonormal(t: &PlanarTransform) {
        let r = t.rotation;
        assert!((r.transpose() * r - Matrix2::identity()).amax() <= 1e-12);
        assert!((r.determinant() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn straight_segment() {
        let t = segment_transform(0.0, 0.128).unwrap();
        assert_eq!(t.rotation, Matrix2::identity());
        assert_eq!(t.translation, Vector2::new(0.128, 0.0));
    }

    #[test]
    fn quarter_and_half_turn_segments() {
        let t = segment_transform(FRAC_PI_2, 0.128).unwrap();
        assert!((t.angle() - FRAC_PI_2).abs() < 1e-15);
        assert!((t.translation - Vector2::new(0.081487, 0.081487)).amax() < 1e-6);
        assert!((t.translation.x - 2.0 * 0.128 / PI).abs() < 1e-15);
        let t = segment_transform(PI, 0.128).unwrap();
        assert!((t.angle().abs() - PI).abs() < 1e-15);
        assert!(t.translation.x.abs() < 1e-15);
        assert!((t.translation.y - 0.081487).abs() < 1e-6);
        assert_orthonormal(&t);
    }

    #[test]
    fn segment_rejects_bad_input() {
        assert!(segment_transform(0.3, 0.0).is_err());
        assert!(segment_transform(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn chain_examples() {
        let p = RobotParams::two_segment();
        let t = chain_transform(&v(&[0.0, 0.0]), &p).unwrap();
        assert!((t.translation - Vector2::new(0.256, 0.0)).amax() < 1e-15);
        let t = chain_transform(&v(&[FRAC_PI_2, FRAC_PI_2]), &p).unwrap();
        assert!(t.translation.x.abs() < 1e-15);
        assert!((t.translation.y - 0.162975).abs() < 1e-6);
        assert!((t.translation.y - 4.0 * 0.128 / PI).abs() < 1e-15);
        assert!(chain_transform(&v(&[0.1]), &p).is_err());
    }

    #[test]
    fn tip_examples() {
        let p = RobotParams::two_segment();
        let r = tip_position(&v(&[0.0, 0.0]), &p).unwrap();
        assert_eq!(r, Vector2::new(0.256, 0.0));
        let r = tip_position(&v(&[FRAC_PI_2, FRAC_PI_2]), &p).unwrap();
        assert!(r.x.abs() < 1e-15 && (r.y - 0.162975).abs() < 1e-6);
        let a = tip_position(&v(&[0.7, -1.9]), &p).unwrap();
        let b = tip_position(&v(&[-0.7, 1.9]), &p).unwrap();
        assert!((a.x - b.x).abs() < 1e-15 && (a.y + b.y).abs() < 1e-15);
        assert!(tip_position(&v(&[0.1, 0.2, 0.3]), &p).is_err());
    }

    #[test]
    fn closed_form_matches_generic_chain() {
        let p = RobotParams::two_segment();
        for q in [[0.3, -1.2], [2.9, 2.9], [-0.05, 1e-6], [0.0, 3.0]] {
            let closed = tip_two_segment(q[0], q[1], p.lengths());
            let generic = chain_point(&q, p.lengths(), 1, 1.0);
            assert!((closed - generic).amax() < 1e-15);
            let jc = tip_jacobian_two_segment(q[0], q[1], p.lengths());
            let jg = chain_point_jacobian(&q, p.lengths(), 1, 1.0);
            assert!((jc - jg).amax() < 1e-15);
        }
    }

    #[test]
    fn jacobian_finite_at_straight_arm() {
        let p = RobotParams::two_segment();
        let j = tip_jacobian(&v(&[0.0, 0.0]), &p).unwrap();
        assert!(j.iter().all(|x| x.is_finite()));
        // both columns point along +y: the straight arm is singular
        assert!((j[(1, 0)] - (0.064 + 0.128)).abs() < 1e-15);
        assert!((j[(1, 1)] - 0.064).abs() < 1e-15);
    }

    #[test]
    fn mirrored_jacobian_rows() {
        let p = RobotParams::two_segment();
        let a = tip_jacobian(&v(&[0.4, 1.1]), &p).unwrap();
        let b = tip_jacobian(&v(&[-0.4, -1.1]), &p).unwrap();
        // r_x is even in q, r_y odd: dr_x/dq flips sign, dr_y/dq does not
        for k in 0..2 {
            assert!((a[(0, k)] + b[(0, k)]).abs() < 1e-15);
            assert!((a[(1, k)] - b[(1, k)]).abs() < 1e-15);
        }
    }

    #[test]
    fn hessian_matches_jacobian_differences() {
        let lengths = [0.1, 0.15, 0.12];
        let q = [0.4, -0.9, 1.7];
        let h = 1e-6;
        for (segment, fraction) in [(0, 0.5), (1, 0.5), (2, 1.0)] {
            let hess = chain_point_hessian(&q, &lengths, segment, fraction);
            for l in 0..3 {
                let mut qp = q;
                let mut qm = q;
                qp[l] += h;
                qm[l] -= h;
                let fd = (chain_point_jacobian(&qp, &lengths, segment, fraction)
                    - chain_point_jacobian(&qm, &lengths, segment, fraction))
                    / (2.0 * h);
                for k in 0..3 {
                    let err = (fd.column(k) - hess[k * 3 + l]).amax();
                    assert!(err < 1e-8, "seg {segment} k {k} l {l}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn state_validation() {
        assert!(ConfigurationState::new(v(&[0.1, 7.0]), v(&[0.0, 0.0])).is_err());
        assert!(ConfigurationState::new(v(&[0.1, f64::NAN]), v(&[0.0, 0.0])).is_err());
        assert!(ConfigurationState::new(v(&[0.1]), v(&[0.0, 0.0])).is_err());
        assert!(ConfigurationState::with_bound(v(&[7.0]), v(&[0.0]), 10.0).is_ok());
    }
}
