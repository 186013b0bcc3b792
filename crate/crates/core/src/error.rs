use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while planning, simulating or reading configs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("curvature {value} rad exceeds the working bound of {bound} rad")]
    OutOfWorkingBound { value: f64, bound: f64 },

    #[error("invalid robot parameters: {0}")]
    InvalidParams(String),

    #[error("segment index {index} out of range for a {segments}-segment robot")]
    SegmentOutOfRange { index: usize, segments: usize },

    #[error("inertia matrix is not positive definite at q = {q:?}")]
    SingularDynamics { q: Vec<f64> },

    #[error("input calibration matrix is singular")]
    SingularInputGain,

    #[error("tip target unreachable, best residual {residual:.3e} m")]
    Unreachable { residual: f64 },

    #[error("tip Jacobian is singular at q = {q:?}")]
    KinematicSingularity { q: Vec<f64> },

    #[error("inverse kinematics failed at timestep {step}: {source}")]
    AtTimestep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("integration step size underflow at t = {t} s")]
    StepSizeUnderflow { t: f64 },

    #[error("invalid trajectory spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid CSV: {0}")]
    InvalidCsv(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 1 for numerical failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::InvalidSpec(_)
            | Error::InvalidArgument(_)
            | Error::InvalidCsv(_)
            | Error::Io { .. }
            | Error::Json { .. }
            | Error::Csv(_)
            | Error::DimensionMismatch { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtTimestep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
