//! The four operations behind the `pcc-flat` binary.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::Args;
use nalgebra::DVector;

use crate::bench::{benchmark_sweep, crossover, flatness_cv, time_generation, Crossover};
use crate::error::{Error, Result};
use crate::io::{create, load_params, load_spec, read_trajectory_csv, write_rollout_csv, write_timing_csv, write_trajectory_csv};
use crate::kinematics::ConfigurationState;
use crate::params::RobotParams;
use crate::plot::{render_csv, PlotKind};
use crate::simulation::{perturbed_start, rollout_open_loop, rollout_with_input, Hold, InputSchedule, RolloutOptions};

fn params_or_default(path: &Option<PathBuf>) -> Result<RobotParams> {
    match path {
        Some(p) => load_params(p),
        None => Ok(RobotParams::two_segment()),
    }
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    /// Trajectory specification (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Robot parameters (JSON); the built-in two-segment arm if omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<String> {
    let params = params_or_default(&args.params)?;
    let spec = load_spec(&args.spec)?;
    let (traj, record) = time_generation(&spec, &params)?;
    write_trajectory_csv(&traj, create(&args.out)?)?;
    Ok(format!("wrote {} samples to {}\n{}", traj.len(), args.out.display(), record.summary()))
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    /// Trajectory specification (JSON); supplies the reference tip path.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Planned trajectory CSV from `generate`; planned from the spec if omitted.
    #[arg(long)]
    pub traj: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Offset added to every initial curvature [rad].
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb: f64,
    /// Run unforced and append an energy column.
    #[arg(long)]
    pub zero_input: bool,
    /// Interpolation of the sampled input between samples.
    #[arg(long, default_value = "linear")]
    pub hold: Hold,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let params = params_or_default(&args.params)?;
    let spec = load_spec(&args.spec)?;
    let path = spec.to_path()?;
    let traj = match &args.traj {
        Some(p) => read_trajectory_csv(crate::io::open(p)?)?,
        None => crate::trajectory::generate(&path, spec.branch, &params)?,
    };
    params.check_dim(traj.segments())?;
    if !args.perturb.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation {} is not finite", args.perturb)));
    }
    let offset = DVector::from_element(params.segments(), args.perturb);
    let x0: ConfigurationState = perturbed_start(&traj, &offset)?;
    let options = RolloutOptions {
        hold: args.hold,
        ..RolloutOptions::default()
    };
    let (result, energies) = if args.zero_input {
        let r = rollout_with_input(&InputSchedule::Zero, &x0, &path, &params, options.tolerances)?;
        let e = r.energies(&params)?;
        (r, Some(e))
    } else {
        (rollout_open_loop(&traj, &x0, &path, &params, options)?, None)
    };
    write_rollout_csv(&result, energies.as_deref(), create(&args.out)?)?;
    let mut msg = format!(
        "wrote {} samples to {}\ne_avg={:.6e} m max_err={:.6e} m",
        result.times.len(),
        args.out.display(),
        result.e_avg,
        result.max_error()
    );
    if let Some(ts) = result.settling_time(1e-2) {
        msg.push_str(&format!(" settles(<1cm)={ts:.3} s"));
    }
    Ok(msg)
}

#[derive(Args, Debug, Clone)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    pub dt_min: f64,
    #[arg(long, default_value_t = 3e-3)]
    pub dt_max: f64,
    /// Number of timesteps in the sweep.
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<String> {
    let params = params_or_default(&args.params)?;
    let spec = load_spec(&args.spec)?;
    let points = benchmark_sweep(&spec, &params, args.dt_min, args.dt_max, args.steps)?;
    write_timing_csv(&points, create(&args.out)?)?;
    let cross = match crossover(&points) {
        Some(Crossover::Bracketed(dt)) => format!("real-time crossover at dt={dt:.3e} s"),
        Some(Crossover::Extrapolated(dt)) => {
            format!("no crossover in sweep; flat-line estimate dt={dt:.3e} s")
        }
        None => "no sweep points".into(),
    };
    Ok(format!(
        "wrote {} timesteps to {}\n{cross}\nt_avg coefficient of variation {:.1}%",
        points.len(),
        args.out.display(),
        100.0 * flatness_cv(&points)
    ))
}

#[derive(Args, Debug, Clone)]
pub struct PlotArgs {
    /// trajectory, rollout or timing.
    #[arg(long)]
    pub kind: String,
    /// CSV written by generate, simulate or benchmark.
    #[arg(long)]
    pub csv: PathBuf,
    /// Output SVG.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_plot(args: &PlotArgs) -> Result<String> {
    let kind: PlotKind = args.kind.parse()?;
    let text = fs::read_to_string(&args.csv).map_err(|source| Error::Io {
        path: args.csv.clone(),
        source,
    })?;
    let svg = render_csv(kind, &text)?;
    let mut w = create(&args.out)?;
    w.write_all(svg.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io {
            path: args.out.clone(),
            source,
        })?;
    Ok(format!("wrote {}", args.out.display()))
}
