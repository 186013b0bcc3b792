//! Projected PCC manipulator dynamics
//! `B(q) q̈ + C(q, q̇) q̇ + K q + D q̇ = J_λᵀ u`.
//!
//! `B` is assembled from the lumped segment masses. `C` comes from the
//! Christoffel symbols of `B`, so `Ḃ − 2C` is skew-symmetric by construction.
//! Gravity is zero for the planar robot.

use nalgebra::{DMatrix, DVector, Matrix2xX, Vector2};

use crate::error::{Error, Result};
use crate::kinematics::{check_finite, ConfigurationState};
use crate::params::RobotParams;
use crate::rigid::{jm, m_of_q, mass_point_hessian, rigid_inertia};
use crate::kinematics;

/// Inertia, Coriolis and inertia partials evaluated at one `(q, q̇)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsTerms {
    pub inertia: DMatrix<f64>,
    pub coriolis: DMatrix<f64>,
    /// `∂B/∂q_k` for each `k`.
    pub inertia_partials: Vec<DMatrix<f64>>,
}

impl DynamicsTerms {
    pub fn evaluate(q: &DVector<f64>, q_dot: &DVector<f64>, params: &RobotParams) -> Result<Self> {
        check_inputs(q, params)?;
        check_rate(q_dot, params)?;
        let (inertia, inertia_partials) = inertia_with_partials(q, params);
        let coriolis = christoffel(&inertia_partials, q_dot);
        Ok(Self {
            inertia,
            coriolis,
            inertia_partials,
        })
    }

    /// `Ḃ = Σ_k ∂B/∂q_k q̇_k`.
    pub fn inertia_rate(&self, q_dot: &DVector<f64>) -> DMatrix<f64> {
        let n = self.inertia.nrows();
        self.inertia_partials
            .iter()
            .zip(q_dot.iter())
            .fold(DMatrix::zeros(n, n), |acc, (d, &v)| acc + d * v)
    }
}

fn check_inputs(q: &DVector<f64>, params: &RobotParams) -> Result<()> {
    params.check_dim(q.len())?;
    check_finite(q)
}

fn check_rate(q_dot: &DVector<f64>, params: &RobotParams) -> Result<()> {
    params.check_dim(q_dot.len())?;
    if q_dot.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("curvature rate"))
    }
}

/// `B(q) = Σ_i m_i J_μiᵀ J_μi`.
pub fn inertia(q: &DVector<f64>, params: &RobotParams) -> Result<DMatrix<f64>> {
    check_inputs(q, params)?;
    let n = q.len();
    let mut b = DMatrix::zeros(n, n);
    for (i, &m) in params.masses().iter().enumerate() {
        let j = kinematics::chain_point_jacobian(q.as_slice(), params.lengths(), i, 0.5);
        b += m * j.transpose() * j;
    }
    Ok(b)
}

/// `B(q) = J_mᵀ B_ξ(m(q)) J_m`, projecting the rigid chain's inertia.
pub fn inertia_projected(q: &DVector<f64>, params: &RobotParams) -> Result<DMatrix<f64>> {
    let xi = m_of_q(q, params)?.xi;
    let j_m = jm(q, params)?;
    Ok(j_m.transpose() * rigid_inertia(&xi, params.masses()) * j_m)
}

/// Exact `∂B/∂q_k`, from the analytic Hessians of the mass points.
pub fn inertia_partials(q: &DVector<f64>, params: &RobotParams) -> Result<Vec<DMatrix<f64>>> {
    check_inputs(q, params)?;
    Ok(inertia_with_partials(q, params).1)
}

fn inertia_with_partials(q: &DVector<f64>, params: &RobotParams) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
    let n = q.len();
    let qs = q.as_slice();
    let lengths = params.lengths();
    let mut b = DMatrix::zeros(n, n);
    let mut partials = vec![DMatrix::zeros(n, n); n];
    let mut dj = Matrix2xX::zeros(n);
    for (i, &m) in params.masses().iter().enumerate() {
        let j = kinematics::chain_point_jacobian(qs, lengths, i, 0.5);
        let hess = mass_point_hessian(qs, i, lengths);
        b += m * j.transpose() * &j;
        for (k, partial) in partials.iter_mut().enumerate() {
            for l in 0..n {
                dj.set_column(l, &hess[l * n + k]);
            }
            let prod = m * j.transpose() * &dj;
            *partial += &prod + prod.transpose();
        }
    }
    (b, partials)
}

fn christoffel(partials: &[DMatrix<f64>], q_dot: &DVector<f64>) -> DMatrix<f64> {
    let n = q_dot.len();
    DMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| 0.5 * (partials[k][(i, j)] + partials[j][(i, k)] - partials[i][(j, k)]) * q_dot[k])
            .sum()
    })
}

/// `C(q, q̇)` from the Christoffel symbols of the first kind.
pub fn coriolis(q: &DVector<f64>, q_dot: &DVector<f64>, params: &RobotParams) -> Result<DMatrix<f64>> {
    check_rate(q_dot, params)?;
    let partials = inertia_partials(q, params)?;
    Ok(christoffel(&partials, q_dot))
}

/// Gravity term; identically zero for the planar robot.
pub fn gravity(q: &DVector<f64>, params: &RobotParams) -> Result<DVector<f64>> {
    check_inputs(q, params)?;
    Ok(DVector::zeros(q.len()))
}

/// `J_λᵀ u` for the diagonal calibration.
pub fn generalized_input(u: &DVector<f64>, params: &RobotParams) -> DVector<f64> {
    u.component_mul(params.input_gain())
}

/// `q̈ = B⁻¹(J_λᵀ u − C q̇ − K q − D q̇)`.
pub fn forward_dynamics(
    state: &ConfigurationState,
    u: &DVector<f64>,
    params: &RobotParams,
) -> Result<DVector<f64>> {
    params.check_dim(u.len())?;
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("input"));
    }
    let terms = DynamicsTerms::evaluate(&state.q, &state.q_dot, params)?;
    let rhs = generalized_input(u, params)
        - &terms.coriolis * &state.q_dot
        - params.stiffness() * &state.q
        - params.damping() * &state.q_dot
        - gravity(&state.q, params)?;
    let chol = terms.inertia.cholesky().ok_or_else(|| Error::SingularDynamics {
        q: state.q.iter().copied().collect(),
    })?;
    Ok(chol.solve(&rhs))
}

/// Residual of the manipulator equation for a candidate `(q̈, u)`.
pub fn manipulator_residual(
    state: &ConfigurationState,
    q_ddot: &DVector<f64>,
    u: &DVector<f64>,
    params: &RobotParams,
) -> Result<DVector<f64>> {
    let terms = DynamicsTerms::evaluate(&state.q, &state.q_dot, params)?;
    Ok(&terms.inertia * q_ddot + &terms.coriolis * &state.q_dot
        + params.stiffness() * &state.q
        + params.damping() * &state.q_dot
        - generalized_input(u, params))
}

/// Kinetic plus elastic energy `½ q̇ᵀ B q̇ + ½ qᵀ K q`.
pub fn energy(state: &ConfigurationState, params: &RobotParams) -> Result<f64> {
    let b = inertia(&state.q, params)?;
    let kinetic = 0.5 * state.q_dot.dot(&(b * &state.q_dot));
    let elastic = 0.5 * state.q.dot(&(params.stiffness() * &state.q));
    Ok(kinetic + elastic)
}

/// Centre of mass of the whole robot.
pub fn center_of_mass(q: &DVector<f64>, params: &RobotParams) -> Result<Vector2<f64>> {
    check_inputs(q, params)?;
    let total: f64 = params.masses().iter().sum();
    let weighted: Vector2<f64> = params
        .masses()
        .iter()
        .enumerate()
        .map(|(i, &m)| m * kinematics::chain_point(q.as_slice(), params.lengths(), i, 0.5))
        .sum();
    Ok(weighted / total)
}
