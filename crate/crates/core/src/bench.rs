//! Per-iteration latency of trajectory generation versus real time.

use crate::error::Result;
use crate::params::RobotParams;
use crate::trajectory::{generate_timed, FlatTrajectory, SplineSpec, TipPath};

/// Iterations run, and discarded, before the timed pass.
pub const WARMUP_ITERATIONS: usize = 100;

/// Wall-clock cost of planning one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRecord {
    pub dt: f64,
    pub iteration_seconds: Vec<f64>,
    pub t_avg: f64,
    /// `dt / t_avg`; above one means faster than real time.
    pub speedup: f64,
}

impl TimingRecord {
    pub fn from_iterations(dt: f64, iteration_seconds: Vec<f64>) -> Self {
        let t_avg = iteration_seconds.iter().sum::<f64>() / iteration_seconds.len().max(1) as f64;
        Self {
            dt,
            iteration_seconds,
            t_avg,
            speedup: dt / t_avg,
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "iterations={} dt={} t_avg={:.3e} s speedup={:.1}x",
            self.iteration_seconds.len(),
            self.dt,
            self.t_avg,
            self.speedup
        )
    }
}

/// Generates `spec` once as warm-up, then again under the stopwatch.
pub fn time_generation(spec: &SplineSpec, params: &RobotParams) -> Result<(FlatTrajectory, TimingRecord)> {
    let path = spec.to_path()?;
    let warm = path.samples().len().min(WARMUP_ITERATIONS);
    if warm >= 3 {
        let prefix = TipPath::new(path.samples()[..warm].to_vec(), path.dt())?;
        generate_timed(&prefix, spec.branch, params)?;
    }
    let run = generate_timed(&path, spec.branch, params)?;
    let record = TimingRecord::from_iterations(path.dt(), run.iteration_seconds);
    Ok((run.trajectory, record))
}

/// One row of a timestep sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub dt: f64,
    pub t_avg: f64,
    pub speedup: f64,
}

/// Log-spaced timesteps from `dt_min` to `dt_max`, each snapped so the
/// duration is a whole number of steps.
pub fn sweep_timesteps(total_time: f64, dt_min: f64, dt_max: f64, steps: usize) -> Vec<f64> {
    let count = steps.max(2);
    let (lo, hi) = (dt_min.ln(), dt_max.ln());
    (0..count)
        .map(|i| {
            let dt = (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp();
            let n = (total_time / dt).round().max(2.0);
            total_time / n
        })
        .collect()
}

/// Re-plans `spec` at each timestep and records the mean iteration time.
pub fn benchmark_sweep(
    spec: &SplineSpec,
    params: &RobotParams,
    dt_min: f64,
    dt_max: f64,
    steps: usize,
) -> Result<Vec<SweepPoint>> {
    if !(dt_min > 0.0 && dt_min < dt_max) {
        return Err(crate::Error::InvalidArgument(format!(
            "need 0 < dt_min < dt_max, got {dt_min} and {dt_max}"
        )));
    }
    sweep_timesteps(spec.total_time, dt_min, dt_max, steps)
        .into_iter()
        .map(|dt| {
            let (_, rec) = time_generation(&spec.with_dt(dt), params)?;
            Ok(SweepPoint {
                dt,
                t_avg: rec.t_avg,
                speedup: rec.speedup,
            })
        })
        .collect()
}

/// Where planning stops keeping up with real time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossover {
    /// `t_avg = dt` between two swept timesteps (log interpolation).
    Bracketed(f64),
    /// No sign change inside the sweep; the flat-line estimate is the mean
    /// iteration time.
    Extrapolated(f64),
}

impl Crossover {
    pub fn dt(self) -> f64 {
        match self {
            Crossover::Bracketed(dt) | Crossover::Extrapolated(dt) => dt,
        }
    }
}

pub fn crossover(points: &[SweepPoint]) -> Option<Crossover> {
    if points.is_empty() {
        return None;
    }
    let gap = |p: &SweepPoint| p.t_avg.ln() - p.dt.ln();
    for w in points.windows(2) {
        let (a, b) = (gap(&w[0]), gap(&w[1]));
        if a == 0.0 {
            return Some(Crossover::Bracketed(w[0].dt));
        }
        if a.signum() != b.signum() {
            let s = a / (a - b);
            let ln_dt = w[0].dt.ln() + s * (w[1].dt.ln() - w[0].dt.ln());
            return Some(Crossover::Bracketed(ln_dt.exp()));
        }
    }
    Some(Crossover::Extrapolated(mean(points.iter().map(|p| p.t_avg))))
}

/// Coefficient of variation of `t_avg` across the sweep.
pub fn flatness_cv(points: &[SweepPoint]) -> f64 {
    let m = mean(points.iter().map(|p| p.t_avg));
    let var = mean(points.iter().map(|p| (p.t_avg - m).powi(2)));
    var.sqrt() / m
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n.max(1) as f64
}
