//! Open-loop validation: integrate the forward dynamics under a planned input
//! schedule and measure how well the tip follows the reference.

use nalgebra::{DVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::dynamics::{energy, forward_dynamics};
use crate::error::{Error, Result};
use crate::kinematics::{tip_position, ConfigurationState};
use crate::ode::{Dopri5, Tolerances};
use crate::params::RobotParams;
use crate::trajectory::{FlatTrajectory, TipPath};

/// How a sampled input is reconstructed between samples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hold {
    #[default]
    Linear,
    #[serde(rename = "zoh")]
    ZeroOrder,
}

impl std::str::FromStr for Hold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Hold::Linear),
            "zoh" => Ok(Hold::ZeroOrder),
            other => Err(Error::InvalidArgument(format!("unknown hold `{other}`, expected linear|zoh"))),
        }
    }
}

/// Input `u(t)` applied during a rollout.
pub enum InputSchedule<'a> {
    /// Samples `u_k` at `t_k = k·dt`, held according to `hold`.
    Sampled {
        dt: f64,
        samples: &'a [DVector<f64>],
        hold: Hold,
    },
    /// A continuous function of time.
    Continuous(Box<dyn Fn(f64) -> DVector<f64> + 'a>),
    /// `u ≡ 0`.
    Zero,
}

impl<'a> InputSchedule<'a> {
    pub fn sampled(traj: &'a FlatTrajectory, hold: Hold) -> Self {
        InputSchedule::Sampled {
            dt: traj.dt,
            samples: &traj.u,
            hold,
        }
    }

    pub fn continuous(f: impl Fn(f64) -> DVector<f64> + 'a) -> Self {
        InputSchedule::Continuous(Box::new(f))
    }
}

/// `u` on the interval `[t_k, t_{k+1}]` of a sampled schedule.
fn sampled_on_interval(samples: &[DVector<f64>], k: usize, dt: f64, hold: Hold, t: f64) -> DVector<f64> {
    let next = (k + 1).min(samples.len() - 1);
    match hold {
        Hold::ZeroOrder => samples[k].clone(),
        Hold::Linear => {
            let s = ((t - k as f64 * dt) / dt).clamp(0.0, 1.0);
            &samples[k] * (1.0 - s) + &samples[next] * s
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RolloutOptions {
    pub tolerances: Tolerances,
    pub hold: Hold,
}

impl Default for RolloutOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            hold: Hold::Linear,
        }
    }
}

fn split(x: &DVector<f64>, n: usize) -> ConfigurationState {
    ConfigurationState {
        q: x.rows(0, n).into_owned(),
        q_dot: x.rows(n, n).into_owned(),
    }
}

fn stack(state: &ConfigurationState) -> DVector<f64> {
    let n = state.dim();
    let mut x = DVector::zeros(2 * n);
    x.rows_mut(0, n).copy_from(&state.q);
    x.rows_mut(n, n).copy_from(&state.q_dot);
    x
}

fn state_rhs(x: &DVector<f64>, u: &DVector<f64>, params: &RobotParams) -> Result<DVector<f64>> {
    let n = params.segments();
    let state = split(x, n);
    let acc = forward_dynamics(&state, u, params)?;
    let mut dx = DVector::zeros(2 * n);
    dx.rows_mut(0, n).copy_from(&state.q_dot);
    dx.rows_mut(n, n).copy_from(&acc);
    Ok(dx)
}

/// Integrates `ẋ = [q̇; q̈(x, u(t))]` from `x0` at `times[0]` and returns the
/// state at every entry of `times`.
///
/// Sampled schedules are integrated interval by interval so every sample
/// instant is a step boundary; continuous schedules use dense output.
pub fn integrate(
    x0: &ConfigurationState,
    input: &InputSchedule<'_>,
    times: &[f64],
    params: &RobotParams,
    tolerances: Tolerances,
) -> Result<Vec<ConfigurationState>> {
    params.check_dim(x0.dim())?;
    let Some(&t0) = times.first() else {
        return Ok(Vec::new());
    };
    let n = params.segments();
    let mut ode = Dopri5::new(tolerances);
    let start = stack(x0);
    let raw = match input {
        InputSchedule::Continuous(u) => {
            ode.integrate(|t, x| state_rhs(x, &u(t), params), t0, &start, times)?
        }
        InputSchedule::Zero => {
            let zero = DVector::zeros(n);
            ode.integrate(|_, x| state_rhs(x, &zero, params), t0, &start, times)?
        }
        InputSchedule::Sampled { dt, samples, hold } => {
            integrate_sampled(&mut ode, &start, samples, *dt, *hold, times, params)?
        }
    };
    Ok(raw.iter().map(|x| split(x, n)).collect())
}

fn integrate_sampled(
    ode: &mut Dopri5,
    start: &DVector<f64>,
    samples: &[DVector<f64>],
    dt: f64,
    hold: Hold,
    times: &[f64],
    params: &RobotParams,
) -> Result<Vec<DVector<f64>>> {
    if samples.is_empty() {
        return Err(Error::InvalidSpec("empty input schedule".into()));
    }
    let t_last = *times.last().unwrap();
    let horizon = (samples.len() - 1) as f64 * dt;
    if t_last > horizon * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::InvalidSpec(format!(
            "input schedule ends at {horizon} s but output requested at {t_last} s"
        )));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut x = start.clone();
    let mut t = times[0];
    for &target in times {
        // stop at every sample instant on the way to `target`
        while t < target {
            let k = ((t / dt) + 1e-9).floor() as usize;
            let node = ((k + 1) as f64 * dt).min(target);
            let k = k.min(samples.len() - 1);
            x = ode.advance(
                |s, y| state_rhs(y, &sampled_on_interval(samples, k, dt, hold, s), params),
                t,
                &x,
                node,
            )?;
            t = node;
        }
        out.push(x.clone());
    }
    Ok(out)
}

/// Integrated trace of an open-loop rollout compared with its reference.
#[derive(Clone, Debug)]
pub struct RolloutResult {
    pub times: Vec<f64>,
    pub states: Vec<ConfigurationState>,
    pub tips: Vec<Vector2<f64>>,
    pub references: Vec<Vector2<f64>>,
    /// `e(t) = ‖r_t − r(t)‖`, one entry per sample including `t = 0`.
    pub tip_errors: Vec<f64>,
    /// Mean of `e(t)` over `t = 1 … T`.
    pub e_avg: f64,
}

impl RolloutResult {
    /// Earliest time after which the tip error stays below `threshold`.
    pub fn settling_time(&self, threshold: f64) -> Option<f64> {
        let last_bad = self.tip_errors.iter().rposition(|&e| e >= threshold);
        match last_bad {
            None => Some(self.times[0]),
            Some(i) if i + 1 < self.times.len() => Some(self.times[i + 1]),
            Some(_) => None,
        }
    }

    pub fn max_error(&self) -> f64 {
        self.tip_errors.iter().copied().fold(0.0, f64::max)
    }

    /// Energy of each recorded state.
    pub fn energies(&self, params: &RobotParams) -> Result<Vec<f64>> {
        self.states.iter().map(|s| energy(s, params)).collect()
    }
}

/// Plays `traj.u` open loop from `x0` and scores the tip against `path`.
pub fn rollout_open_loop(
    traj: &FlatTrajectory,
    x0: &ConfigurationState,
    path: &TipPath,
    params: &RobotParams,
    options: RolloutOptions,
) -> Result<RolloutResult> {
    check_alignment(traj, path)?;
    rollout_with_input(&InputSchedule::sampled(traj, options.hold), x0, path, params, options.tolerances)
}

/// Rollout under an arbitrary schedule, scored against `path`.
pub fn rollout_with_input(
    input: &InputSchedule<'_>,
    x0: &ConfigurationState,
    path: &TipPath,
    params: &RobotParams,
    tolerances: Tolerances,
) -> Result<RolloutResult> {
    let times: Vec<f64> = (0..path.samples().len()).map(|k| path.time(k)).collect();
    let states = integrate(x0, input, &times, params, tolerances)?;
    let tips = states
        .iter()
        .map(|s| tip_position(&s.q, params))
        .collect::<Result<Vec<_>>>()?;
    let references = path.samples().to_vec();
    let tip_errors: Vec<f64> = tips.iter().zip(&references).map(|(r, r_ref)| (r_ref - r).norm()).collect();
    let e_avg = tip_errors[1..].iter().sum::<f64>() / (tip_errors.len() - 1) as f64;
    Ok(RolloutResult {
        times,
        states,
        tips,
        references,
        tip_errors,
        e_avg,
    })
}

fn check_alignment(traj: &FlatTrajectory, path: &TipPath) -> Result<()> {
    if traj.len() != path.samples().len() {
        return Err(Error::InvalidSpec(format!(
            "trajectory has {} samples, path has {}",
            traj.len(),
            path.samples().len()
        )));
    }
    if (traj.dt - path.dt()).abs() > 1e-12 * path.dt() {
        return Err(Error::InvalidSpec(format!(
            "trajectory dt {} differs from path dt {}",
            traj.dt,
            path.dt()
        )));
    }
    Ok(())
}

/// The planned initial state with every curvature offset by `offset` rad.
pub fn perturbed_start(traj: &FlatTrajectory, offset: &DVector<f64>) -> Result<ConfigurationState> {
    ConfigurationState::new(&traj.q[0] + offset, traj.q_dot[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn equilibrium_is_preserved() {
        let p = RobotParams::two_segment();
        let q = v(&[0.8, -0.5]);
        let hold = p.stiffness() * &q;
        let x0 = ConfigurationState::at_rest(q.clone()).unwrap();
        let times: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let u = hold.clone();
        let states = integrate(&x0, &InputSchedule::continuous(move |_| u.clone()), &times, &p, Tolerances::default()).unwrap();
        for s in &states {
            assert!((&s.q - &q).amax() < 1e-10);
            assert!(s.q_dot.amax() < 1e-10);
        }
        let samples = vec![hold; 51];
        let sampled = InputSchedule::Sampled {
            dt: 0.1,
            samples: &samples,
            hold: Hold::ZeroOrder,
        };
        let states = integrate(&x0, &sampled, &times, &p, Tolerances::default()).unwrap();
        assert!((&states[50].q - &q).amax() < 1e-10);
    }

    #[test]
    fn sampled_and_continuous_agree_for_linear_input() {
        let p = RobotParams::two_segment();
        let x0 = ConfigurationState::at_rest(v(&[0.4, 0.9])).unwrap();
        let dt = 0.05;
        let law = |t: f64| v(&[0.2 + 0.1 * t, 0.45 - 0.05 * t]);
        let samples: Vec<_> = (0..=40).map(|k| law(k as f64 * dt)).collect();
        let times: Vec<f64> = (0..=40).map(|k| k as f64 * dt).collect();
        let a = integrate(&x0, &InputSchedule::continuous(law), &times, &p, Tolerances::default()).unwrap();
        let sampled = InputSchedule::Sampled {
            dt,
            samples: &samples,
            hold: Hold::Linear,
        };
        let b = integrate(&x0, &sampled, &times, &p, Tolerances::default()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((&x.q - &y.q).amax() < 1e-7);
        }
    }

    #[test]
    fn schedule_too_short_is_rejected() {
        let p = RobotParams::two_segment();
        let x0 = ConfigurationState::at_rest(v(&[0.4, 0.9])).unwrap();
        let samples = vec![v(&[0.0, 0.0]); 3];
        let sampled = InputSchedule::Sampled {
            dt: 0.1,
            samples: &samples,
            hold: Hold::Linear,
        };
        assert!(integrate(&x0, &sampled, &[0.0, 0.5], &p, Tolerances::default()).is_err());
    }

    #[test]
    fn hold_parsing() {
        assert_eq!("linear".parse::<Hold>().unwrap(), Hold::Linear);
        assert_eq!("zoh".parse::<Hold>().unwrap(), Hold::ZeroOrder);
        assert!("cubic".parse::<Hold>().is_err());
    }

    #[test]
    fn settling_time_semantics() {
        let r = RolloutResult {
            times: vec![0.0, 0.1, 0.2, 0.3],
            states: Vec::new(),
            tips: Vec::new(),
            references: Vec::new(),
            tip_errors: vec![0.5, 0.02, 0.001, 0.0005],
            e_avg: 0.0,
        };
        assert_eq!(r.settling_time(0.01), Some(0.2));
        assert_eq!(r.settling_time(1.0), Some(0.0));
        assert_eq!(r.settling_time(1e-4), None);
    }
}
