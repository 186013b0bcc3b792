//! Flatness-based trajectory generation for planar piecewise-constant-curvature
//! soft manipulators.
//!
//! A tip path is mapped through inverse kinematics to curvatures, which are the
//! flat outputs of the dynamics; the feedforward input follows algebraically
//! from the curvatures and their derivatives.

pub mod arc;
pub mod bench;
pub mod commands;
pub mod dynamics;
mod error;
pub mod flatness;
pub mod ik;
pub mod io;
pub mod kinematics;
pub mod ode;
pub mod params;
pub mod plot;
pub mod rigid;
pub mod simulation;
pub mod spline;
pub mod trajectory;

pub use error::{Error, Result};
pub use flatness::{flat_input, flat_state, FlatOutputPoint};
pub use ik::{solve_ik, ConcavityBranch, IkProblem};
pub use kinematics::{tip_jacobian, tip_position, ConfigurationState};
pub use params::RobotParams;
pub use simulation::{rollout_open_loop, Hold, RolloutOptions, RolloutResult};
pub use trajectory::{generate, FlatTrajectory, SplineSpec, TipPath};
