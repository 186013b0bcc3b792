//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report prints in order; exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{central_diff, data, nonsingular, params, rel_err, rng, spec, uniform, v};
use nalgebra::{DMatrix, DVector};
use pcc_flat::bench::{benchmark_sweep, flatness_cv, time_generation};
use pcc_flat::dynamics::{energy, inertia, inertia_partials, inertia_projected, DynamicsTerms};
use pcc_flat::ode::Tolerances;
use pcc_flat::rigid::{jm, jm_dot, m_of_q};
use pcc_flat::simulation::{integrate, perturbed_start, InputSchedule};
use pcc_flat::{
    flat_input, flat_state, generate, rollout_open_loop, solve_ik, tip_jacobian, tip_position, ConfigurationState,
    FlatOutputPoint, IkProblem, RobotParams, RolloutOptions, SplineSpec,
};

type Outcome = Result<String, String>;
type Criterion = fn(&RobotParams) -> Outcome;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e_avg(spec: &SplineSpec, params: &RobotParams) -> pcc_flat::Result<f64> {
    let path = spec.to_path()?;
    let traj = generate(&path, spec.branch, params)?;
    let x0 = flat_state(&traj.flat_point(0));
    Ok(rollout_open_loop(&traj, &x0, &path, params, RolloutOptions::default())?.e_avg)
}

fn open_loop_tracking(params: &RobotParams) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["a", "b", "c"] {
        let e = e_avg(&spec(name), params).map_err(|e| e.to_string())?;
        ok &= e <= 5e-4;
        parts.push(format!("{}={e:.2e}", name.to_uppercase()));
    }
    check(ok, format!("e_avg {} m (bound 5e-4)", parts.join(" ")))
}

fn analytic_flat_output(t: f64) -> FlatOutputPoint {
    let y = v(&[0.6 * (0.5 * t).sin() + 0.9, 0.5 * (0.4 * t).cos() - 0.9]);
    let y_dot = v(&[0.3 * (0.5 * t).cos(), -0.2 * (0.4 * t).sin()]);
    let y_ddot = v(&[-0.15 * (0.5 * t).sin(), -0.08 * (0.4 * t).cos()]);
    FlatOutputPoint::new(y, y_dot, y_ddot).unwrap()
}

fn flatness_round_trip(params: &RobotParams) -> Outcome {
    let times: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.01).collect();
    let input = InputSchedule::continuous(|t| flat_input(&analytic_flat_output(t), params).unwrap());
    let x0 = flat_state(&analytic_flat_output(0.0));
    let states =
        integrate(&x0, &input, &times, params, Tolerances::default()).map_err(|e| e.to_string())?;
    let worst = times
        .iter()
        .zip(&states)
        .map(|(&t, s)| (&s.q - analytic_flat_output(t).y).amax())
        .fold(0.0, f64::max);
    check(worst <= 1e-5, format!("max ‖q − y‖∞ = {worst:.2e} rad over 10 s (bound 1e-5)"))
}

fn perturbed_convergence(params: &RobotParams) -> Outcome {
    let spec = spec("a");
    let path = spec.to_path().map_err(|e| e.to_string())?;
    let traj = generate(&path, spec.branch, params).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for offset in [[0.3, 0.3], [-0.3, -0.3], [0.3, -0.3]] {
        let x0 = perturbed_start(&traj, &v(&offset)).map_err(|e| e.to_string())?;
        let r = rollout_open_loop(&traj, &x0, &path, params, RolloutOptions::default())
            .map_err(|e| e.to_string())?;
        let after = r
            .times
            .iter()
            .zip(&r.tip_errors)
            .filter(|(&t, _)| t >= 0.5 - 1e-12)
            .map(|(_, &e)| e)
            .fold(0.0, f64::max);
        ok &= after < 1e-2;
        parts.push(format!("{offset:+.1?}: e(0)={:.1e} max e(t≥0.5)={after:.1e}", r.tip_errors[0]));
    }
    check(ok, format!("{} m (bound 1e-2)", parts.join(", ")))
}

fn structural(params: &RobotParams) -> Outcome {
    let mut rng = rng(4);
    let (mut sym, mut skew, mut dual, mut jac) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut definite = true;
    let xi = |q: &DVector<f64>| {
        let x = m_of_q(q, params).unwrap().xi;
        DMatrix::from_column_slice(x.len(), 1, x.as_slice())
    };
    let tip = |q: &DVector<f64>| {
        let r = tip_position(q, params).unwrap();
        DMatrix::from_column_slice(2, 1, r.as_slice())
    };
    for _ in 0..1000 {
        let q = nonsingular(&mut rng, params, -3.0, 3.0);
        let q_dot = uniform(&mut rng, 2, -3.0, 3.0);
        let w = uniform(&mut rng, 2, -1.0, 1.0);

        let terms = DynamicsTerms::evaluate(&q, &q_dot, params).unwrap();
        let b = &terms.inertia;
        sym = sym.max((b - b.transpose()).amax());
        definite &= b.clone().cholesky().is_some();
        let n_mat = terms.inertia_rate(&q_dot) - 2.0 * &terms.coriolis;
        let scale = (terms.inertia_rate(&q_dot).norm() + 2.0 * terms.coriolis.norm()) * w.norm_squared();
        skew = skew.max(w.dot(&(n_mat * &w)).abs() / scale.max(1e-300));
        dual = dual.max(rel_err(b, &inertia_projected(&q, params).unwrap(), 1e-300));

        let jm_a = jm(&q, params).unwrap();
        let tip_a = DMatrix::from_column_slice(2, 2, tip_jacobian(&q, params).unwrap().as_slice());
        let partials = inertia_partials(&q, params).unwrap();
        let mut jm_fd = DMatrix::zeros(jm_a.nrows(), 2);
        let mut tip_fd = DMatrix::zeros(2, 2);
        let mut jm_dot_fd = DMatrix::zeros(jm_a.nrows(), 2);
        for i in 0..2 {
            jm_fd.set_column(i, &central_diff(xi, &q, i).column(0));
            tip_fd.set_column(i, &central_diff(tip, &q, i).column(0));
            jm_dot_fd += central_diff(|p| jm(p, params).unwrap(), &q, i) * q_dot[i];
            let db = central_diff(|p| inertia(p, params).unwrap(), &q, i);
            jac = jac.max(rel_err(&partials[i], &db, 1e-12));
        }
        jac = jac
            .max(rel_err(&jm_a, &jm_fd, 1e-12))
            .max(rel_err(&tip_a, &tip_fd, 1e-12))
            .max(rel_err(&jm_dot(&q, &q_dot, params).unwrap(), &jm_dot_fd, 1e-12));
    }
    check(
        sym <= 1e-12 && definite && skew <= 1e-9 && dual <= 1e-10 && jac <= 1e-6,
        format!(
            "1000 samples: asym {sym:.1e}, PD {definite}, skew {skew:.1e}, dual B {dual:.1e}, Jacobians vs FD {jac:.1e}"
        ),
    )
}

fn fk_ik(params: &RobotParams) -> Outcome {
    let mut rng = rng(5);
    let (mut residual, mut q_err) = (0.0f64, 0.0f64);
    let mut per_branch = [0usize; 2];
    let mut failures = 0usize;
    for k in 0..1000 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let q_star = nonsingular(&mut rng, params, 0.2, 2.8) * sign;
        let seed = &q_star + uniform(&mut rng, 2, -0.05, 0.05);
        let target = tip_position(&q_star, params).unwrap();
        match solve_ik(&IkProblem::new(target, seed), params) {
            Ok(q) => {
                residual = residual.max((tip_position(&q, params).unwrap() - target).norm());
                q_err = q_err.max((q - &q_star).amax());
                per_branch[k % 2] += 1;
            }
            Err(_) => failures += 1,
        }
    }
    check(
        failures == 0 && residual <= 1e-10 && q_err <= 1e-8,
        format!(
            "ccw {} + cw {} solves, {failures} failures, max residual {residual:.1e} m, max |q − q*| {q_err:.1e} rad",
            per_branch[0], per_branch[1]
        ),
    )
}

fn passivity(params: &RobotParams) -> Outcome {
    let mut rng = rng(6);
    let times: Vec<f64> = (0..=600).map(|k| k as f64 * 0.005).collect();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let q = uniform(&mut rng, 2, -2.0, 2.0);
        let q_dot = uniform(&mut rng, 2, -4.0, 4.0);
        let x0 = ConfigurationState::new(q, q_dot).unwrap();
        let states = integrate(&x0, &InputSchedule::Zero, &times, params, Tolerances::default())
            .map_err(|e| e.to_string())?;
        let e: Vec<f64> = states.iter().map(|s| energy(s, params).unwrap()).collect();
        for w in e.windows(2) {
            worst = worst.max((w[1] - w[0]) / e[0]);
        }
    }
    check(worst <= 1e-8, format!("10 rollouts, largest relative energy increase {worst:.1e} (slack 1e-8)"))
}

fn timing(params: &RobotParams) -> Outcome {
    let spec = spec("a");
    let started = Instant::now();
    let points = benchmark_sweep(&spec, params, 1e-4, 3e-3, 8).map_err(|e| e.to_string())?;
    let cv = flatness_cv(&points);
    let (_, nominal) = time_generation(&spec, params).map_err(|e| e.to_string())?;
    check(
        cv < 0.25 && nominal.speedup >= 10.0,
        format!(
            "t_avg CV {:.1}% over {} timesteps, speedup {:.0}x at dt=0.01 (t_avg {:.2e} s), {:.1} s wall",
            100.0 * cv,
            points.len(),
            nominal.speedup,
            nominal.t_avg,
            started.elapsed().as_secs_f64()
        ),
    )
}

fn dt_convergence(params: &RobotParams) -> Outcome {
    let base = spec("a");
    let errs = [0.01, 0.005, 0.0025]
        .iter()
        .map(|&dt| e_avg(&base.with_dt(dt), params))
        .collect::<pcc_flat::Result<Vec<f64>>>()
        .map_err(|e| e.to_string())?;
    check(
        errs[1] < errs[0] && errs[2] < errs[1],
        format!("e_avg {:.2e} → {:.2e} → {:.2e} m", errs[0], errs[1], errs[2]),
    )
}

fn main() -> ExitCode {
    assert!(data("params.json").exists());
    let params = params();
    let criteria: [(&str, Criterion); 8] = [
        ("open-loop tracking", open_loop_tracking),
        ("flatness round-trip", flatness_round_trip),
        ("perturbed initial conditions", perturbed_convergence),
        ("structural dynamics", structural),
        ("FK∘IK identity", fk_ik),
        ("passivity", passivity),
        ("timing", timing),
        ("dt convergence", dt_convergence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run(&params) {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {} {name}: {detail}", i + 1);
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
