use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default segment length of the two-segment prototype, in meters.
pub const DEFAULT_LENGTH: f64 = 0.128;
/// Default segment mass, in kilograms.
pub const DEFAULT_MASS: f64 = 0.072;
/// Default diagonal stiffness, N·m/rad.
pub const DEFAULT_STIFFNESS: f64 = 0.5;
/// Default diagonal damping, N·m·s/rad.
pub const DEFAULT_DAMPING: f64 = 0.05;

/// Physical description of an `n`-segment planar PCC manipulator.
///
/// Construction validates every invariant, so holders of a `RobotParams` may
/// assume positive lengths and masses, symmetric positive definite stiffness
/// and damping, and an invertible diagonal input calibration.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotParams {
    lengths: Vec<f64>,
    masses: Vec<f64>,
    stiffness: DMatrix<f64>,
    damping: DMatrix<f64>,
    input_gain: DVector<f64>,
}

impl RobotParams {
    pub fn new(
        lengths: Vec<f64>,
        masses: Vec<f64>,
        stiffness: DMatrix<f64>,
        damping: DMatrix<f64>,
        input_gain: DVector<f64>,
    ) -> Result<Self> {
        let n = lengths.len();
        if n == 0 {
            return Err(Error::InvalidParams("at least one segment is required".into()));
        }
        if masses.len() != n {
            return Err(Error::InvalidParams(format!(
                "{} lengths but {} masses",
                n,
                masses.len()
            )));
        }
        if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidParams(format!("segment length {l} must be positive")));
        }
        if let Some(m) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::InvalidParams(format!("segment mass {m} must be positive")));
        }
        check_spd("stiffness", &stiffness, n)?;
        check_spd("damping", &damping, n)?;
        if input_gain.len() != n {
            return Err(Error::InvalidParams(format!(
                "input calibration has {} entries, expected {n}",
                input_gain.len()
            )));
        }
        if input_gain.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidParams("input calibration must be finite".into()));
        }
        if input_gain.iter().any(|g| *g == 0.0) {
            return Err(Error::SingularInputGain);
        }
        Ok(Self {
            lengths,
            masses,
            stiffness,
            damping,
            input_gain,
        })
    }

    /// Identical segments with diagonal stiffness and damping and `J_λ = I`.
    pub fn uniform(n: usize, length: f64, mass: f64, stiffness: f64, damping: f64) -> Result<Self> {
        Self::new(
            vec![length; n],
            vec![mass; n],
            DMatrix::from_diagonal_element(n, n, stiffness),
            DMatrix::from_diagonal_element(n, n, damping),
            DVector::from_element(n, 1.0),
        )
    }

    /// The two-segment prototype: 12.8 cm, 72 g segments.
    pub fn two_segment() -> Self {
        Self::uniform(
            2,
            DEFAULT_LENGTH,
            DEFAULT_MASS,
            DEFAULT_STIFFNESS,
            DEFAULT_DAMPING,
        )
        .expect("default parameters are valid")
    }

    pub fn segments(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    pub fn damping(&self) -> &DMatrix<f64> {
        &self.damping
    }

    /// Diagonal of the input calibration matrix `J_λ`.
    pub fn input_gain(&self) -> &DVector<f64> {
        &self.input_gain
    }

    /// Total arc length, the radius of the reachable workspace.
    pub fn reach(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn with_masses(&self, masses: Vec<f64>) -> Result<Self> {
        Self::new(
            self.lengths.clone(),
            masses,
            self.stiffness.clone(),
            self.damping.clone(),
            self.input_gain.clone(),
        )
    }

    pub fn with_input_gain(&self, gain: DVector<f64>) -> Result<Self> {
        Self::new(
            self.lengths.clone(),
            self.masses.clone(),
            self.stiffness.clone(),
            self.damping.clone(),
            gain,
        )
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.segments() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.segments(),
                found: len,
            })
        }
    }
}

fn check_spd(name: &str, m: &DMatrix<f64>, n: usize) -> Result<()> {
    if m.shape() != (n, n) {
        return Err(Error::InvalidParams(format!(
            "{name} matrix is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams(format!("{name} matrix must be finite")));
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    if (m - m.transpose()).amax() > 1e-12 * scale {
        return Err(Error::InvalidParams(format!("{name} matrix must be symmetric")));
    }
    if m.clone().cholesky().is_none() {
        return Err(Error::InvalidParams(format!(
            "{name} matrix must be positive definite"
        )));
    }
    Ok(())
}
