//! Real-time trajectory generation: tip path → IK → finite differences →
//! flat inputs, one sample at a time.

use std::time::Instant;

use nalgebra::{DVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flatness::{flat_input, FlatOutputPoint};
use crate::ik::{seed_for_branch, solve_ik, ConcavityBranch, IkProblem};
use crate::params::RobotParams;
use crate::spline::NaturalSpline;

/// Relative slack allowed between `T·dt` and the stated duration.
const DURATION_SLACK: f64 = 1e-9;

/// Evenly timed tip targets `r_0 … r_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TipPath {
    samples: Vec<Vector2<f64>>,
    dt: f64,
}

impl TipPath {
    pub fn new(samples: Vec<Vector2<f64>>, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidSpec(format!("dt {dt} must be positive")));
        }
        if samples.len() < 3 {
            return Err(Error::InvalidSpec(format!(
                "a tip path needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(Error::NonFinite("tip path sample"));
        }
        Ok(Self { samples, dt })
    }

    pub fn samples(&self) -> &[Vector2<f64>] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of steps `T`; there are `T + 1` samples.
    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn total_time(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// Control points of a reference tip path and how to sample it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplineSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub control_points: Vec<[f64; 2]>,
    pub branch: ConcavityBranch,
    pub dt: f64,
    pub total_time: f64,
    /// Explicit tip samples; when present they replace the spline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl SplineSpec {
    pub fn validate(&self) -> Result<()> {
        if self.control_points.len() < 2 && self.samples.is_none() {
            return Err(Error::InvalidSpec(format!(
                "need at least 2 control points, got {}",
                self.control_points.len()
            )));
        }
        for (what, v) in [("dt", self.dt), ("total_time", self.total_time)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSpec(format!("{what} = {v} must be positive")));
            }
        }
        Ok(())
    }

    /// Number of steps `T = total_time / dt`, which must be integral.
    pub fn steps(&self) -> Result<usize> {
        self.validate()?;
        let ratio = self.total_time / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > DURATION_SLACK * ratio.max(1.0) || steps < 2.0 {
            return Err(Error::InvalidSpec(format!(
                "total_time {} is not a whole number (≥ 2) of dt {} steps",
                self.total_time, self.dt
            )));
        }
        Ok(steps as usize)
    }

    /// The same path re-sampled at another timestep.
    pub fn with_dt(&self, dt: f64) -> Self {
        Self {
            dt,
            total_time: self.total_time,
            samples: None,
            ..self.clone()
        }
    }

    pub fn to_path(&self) -> Result<TipPath> {
        match &self.samples {
            Some(samples) => {
                let steps = self.steps()?;
                if samples.len() != steps + 1 {
                    return Err(Error::InvalidSpec(format!(
                        "{} explicit samples, expected total_time/dt + 1 = {}",
                        samples.len(),
                        steps + 1
                    )));
                }
                TipPath::new(samples.iter().map(|p| Vector2::new(p[0], p[1])).collect(), self.dt)
            }
            None => sample_spline(self),
        }
    }
}

/// Samples the natural spline at `T + 1` evenly spaced parameter values.
pub fn sample_spline(spec: &SplineSpec) -> Result<TipPath> {
    let steps = spec.steps()?;
    let points: Vec<_> = spec.control_points.iter().map(|p| Vector2::new(p[0], p[1])).collect();
    let spline = NaturalSpline::uniform(&points)?;
    let samples = (0..=steps).map(|k| spline.eval(k as f64 / steps as f64)).collect();
    TipPath::new(samples, spec.dt)
}

/// Backward-difference rates and accelerations, starting at rest.
pub fn finite_diff(q: &[DVector<f64>], dt: f64) -> Result<(Vec<DVector<f64>>, Vec<DVector<f64>>)> {
    if q.is_empty() {
        return Err(Error::InvalidSpec("finite difference of an empty sequence".into()));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidSpec(format!("dt {dt} must be positive")));
    }
    let n = q[0].len();
    let mut rates = Vec::with_capacity(q.len());
    let mut accels = Vec::with_capacity(q.len());
    rates.push(DVector::zeros(n));
    accels.push(DVector::zeros(n));
    for t in 1..q.len() {
        let rate = (&q[t] - &q[t - 1]) / dt;
        accels.push((&rate - &rates[t - 1]) / dt);
        rates.push(rate);
    }
    Ok((rates, accels))
}

/// Synchronized state and input samples produced by [`generate`].
#[derive(Clone, Debug, PartialEq)]
pub struct FlatTrajectory {
    pub dt: f64,
    pub q: Vec<DVector<f64>>,
    pub q_dot: Vec<DVector<f64>>,
    pub q_ddot: Vec<DVector<f64>>,
    pub u: Vec<DVector<f64>>,
}

impl FlatTrajectory {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn segments(&self) -> usize {
        self.q.first().map_or(0, |q| q.len())
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn flat_point(&self, k: usize) -> FlatOutputPoint {
        FlatOutputPoint {
            y: self.q[k].clone(),
            y_dot: self.q_dot[k].clone(),
            y_ddot: self.q_ddot[k].clone(),
        }
    }
}

/// Output of [`generate_timed`]: the trajectory and the wall time of each
/// loop iteration in seconds.
#[derive(Clone, Debug)]
pub struct TimedGeneration {
    pub trajectory: FlatTrajectory,
    pub iteration_seconds: Vec<f64>,
}

/// Plans states and inputs for every sample of `path`.
pub fn generate(path: &TipPath, branch: ConcavityBranch, params: &RobotParams) -> Result<FlatTrajectory> {
    generate_timed(path, branch, params).map(|g| g.trajectory)
}

/// [`generate`], timing each IK + finite difference + flat input iteration
/// with the monotonic clock.
pub fn generate_timed(
    path: &TipPath,
    branch: ConcavityBranch,
    params: &RobotParams,
) -> Result<TimedGeneration> {
    let n = params.segments();
    let dt = path.dt();
    let len = path.samples().len();
    let mut traj = FlatTrajectory {
        dt,
        q: Vec::with_capacity(len),
        q_dot: Vec::with_capacity(len),
        q_ddot: Vec::with_capacity(len),
        u: Vec::with_capacity(len),
    };
    let mut iteration_seconds = Vec::with_capacity(len);
    let mut seed = seed_for_branch(branch);

    for (t, target) in path.samples().iter().enumerate() {
        let start = Instant::now();

        let q = solve_ik(&IkProblem::new(*target, seed), params).map_err(|e| e.at_step(t))?;
        let (q_dot, q_ddot) = match t {
            0 => (DVector::zeros(n), DVector::zeros(n)),
            _ => {
                let rate = (&q - &traj.q[t - 1]) / dt;
                let accel = (&rate - &traj.q_dot[t - 1]) / dt;
                (rate, accel)
            }
        };
        let point = FlatOutputPoint {
            y: q,
            y_dot: q_dot,
            y_ddot: q_ddot,
        };
        let u = flat_input(&point, params).map_err(|e| e.at_step(t))?;

        iteration_seconds.push(start.elapsed().as_secs_f64());

        seed = point.y.clone();
        traj.q.push(point.y);
        traj.q_dot.push(point.y_dot);
        traj.q_ddot.push(point.y_ddot);
        traj.u.push(u);
    }
    Ok(TimedGeneration {
        trajectory: traj,
        iteration_seconds,
    })
}
