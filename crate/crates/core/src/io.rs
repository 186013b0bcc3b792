//! JSON configuration files and CSV exports.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::bench::SweepPoint;
use crate::error::{Error, Result};
use crate::kinematics::ConfigurationState;
use crate::params::RobotParams;
use crate::simulation::RolloutResult;
use crate::trajectory::{FlatTrajectory, SplineSpec};

/// On-disk form of [`RobotParams`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub lengths: Vec<f64>,
    pub masses: Vec<f64>,
    #[serde(rename = "K")]
    pub stiffness: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub damping: Vec<Vec<f64>>,
    /// Full matrix; must be diagonal. Defaults to the identity.
    #[serde(rename = "J_lambda", default, skip_serializing_if = "Option::is_none")]
    pub input_gain: Option<Vec<Vec<f64>>>,
}

fn matrix(name: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParams(format!("{name} must be a square matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl TryFrom<ParamsFile> for RobotParams {
    type Error = Error;

    fn try_from(f: ParamsFile) -> Result<Self> {
        if let Some(n) = f.n {
            if n != f.lengths.len() {
                return Err(Error::InvalidParams(format!(
                    "n = {n} but {} lengths given",
                    f.lengths.len()
                )));
            }
        }
        let n = f.lengths.len();
        let gain = match &f.input_gain {
            None => DVector::from_element(n, 1.0),
            Some(m) => {
                let m = matrix("J_lambda", m)?;
                if m.nrows() != n {
                    return Err(Error::InvalidParams(format!("J_lambda must be {n}x{n}")));
                }
                let off_diagonal = (0..n).any(|i| (0..n).any(|j| i != j && m[(i, j)] != 0.0));
                if off_diagonal {
                    return Err(Error::InvalidParams("J_lambda must be diagonal".into()));
                }
                m.diagonal()
            }
        };
        RobotParams::new(
            f.lengths,
            f.masses,
            matrix("K", &f.stiffness)?,
            matrix("D", &f.damping)?,
            gain,
        )
    }
}

impl From<&RobotParams> for ParamsFile {
    fn from(p: &RobotParams) -> Self {
        Self {
            n: Some(p.segments()),
            lengths: p.lengths().to_vec(),
            masses: p.masses().to_vec(),
            stiffness: rows(p.stiffness()),
            damping: rows(p.damping()),
            input_gain: Some(rows(&DMatrix::from_diagonal(p.input_gain()))),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })?;
    std::fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_params(path: &Path) -> Result<RobotParams> {
    read_json::<ParamsFile>(path)?.try_into()
}

pub fn save_params(path: &Path, params: &RobotParams) -> Result<()> {
    write_json(path, &ParamsFile::from(params))
}

pub fn load_spec(path: &Path) -> Result<SplineSpec> {
    let spec: SplineSpec = read_json(path)?;
    spec.validate()?;
    Ok(spec)
}

pub fn save_spec(path: &Path, spec: &SplineSpec) -> Result<()> {
    write_json(path, spec)
}

/// Buffered writer for `path`, with the path attached to any error.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// Column header of a trajectory CSV for `n` segments.
pub fn trajectory_header(n: usize) -> Vec<String> {
    std::iter::once("t".to_string())
        .chain(indexed("q", n))
        .chain(indexed("qd", n))
        .chain(indexed("qdd", n))
        .chain(indexed("u", n))
        .collect()
}

pub fn write_trajectory_csv<W: Write>(traj: &FlatTrajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trajectory_header(traj.segments()))?;
    for k in 0..traj.len() {
        let row = std::iter::once(traj.time(k))
            .chain(traj.q[k].iter().copied())
            .chain(traj.q_dot[k].iter().copied())
            .chain(traj.q_ddot[k].iter().copied())
            .chain(traj.u[k].iter().copied())
            .map(num);
        w.write_record(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// A CSV loaded into named numeric columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
        if header.iter().all(|h| h.is_empty()) {
            return Err(Error::InvalidCsv("missing header".into()));
        }
        let mut rows = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidCsv(format!("row {}: `{f}` is not a number", line + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::InvalidCsv("no data rows".into()));
        }
        Ok(Self { header, rows })
    }

    pub fn read_path(path: &Path) -> Result<Self> {
        Self::read(open(path)?)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| Error::InvalidCsv(format!("missing column `{name}`")))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    fn indexed_count(&self, prefix: &str) -> usize {
        (1..).take_while(|i| self.column_index(&format!("{prefix}{i}")).is_some()).count()
    }

    fn vectors(&self, prefix: &str, n: usize) -> Result<Vec<DVector<f64>>> {
        let cols = (1..=n)
            .map(|i| self.column(&format!("{prefix}{i}")))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.rows.len())
            .map(|k| DVector::from_iterator(n, cols.iter().map(|c| c[k])))
            .collect())
    }
}

fn uniform_dt(t: &[f64]) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::InvalidCsv("need at least two time samples".into()));
    }
    let dt = t[1] - t[0];
    if dt.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidCsv("time column must increase".into()));
    }
    for (k, &tk) in t.iter().enumerate() {
        if (tk - (t[0] + k as f64 * dt)).abs() > 1e-9 * (1.0 + tk.abs()) {
            return Err(Error::InvalidCsv(format!("time column not evenly spaced at row {}", k + 1)));
        }
    }
    Ok(dt)
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<FlatTrajectory> {
    let table = Table::read(input)?;
    let n = table.indexed_count("q");
    if n == 0 || table.header != trajectory_header(n) {
        return Err(Error::InvalidCsv(format!(
            "expected trajectory header `{}`",
            trajectory_header(n.max(1)).join(",")
        )));
    }
    let dt = uniform_dt(&table.column("t")?)?;
    Ok(FlatTrajectory {
        dt,
        q: table.vectors("q", n)?,
        q_dot: table.vectors("qd", n)?,
        q_ddot: table.vectors("qdd", n)?,
        u: table.vectors("u", n)?,
    })
}

pub fn rollout_header(n: usize, with_energy: bool) -> Vec<String> {
    std::iter::once("t".to_string())
        .chain(indexed("q", n))
        .chain(indexed("qd", n))
        .chain(["rx", "ry", "rx_ref", "ry_ref", "err"].map(String::from))
        .chain(with_energy.then(|| "energy".to_string()))
        .collect()
}

/// Writes the rollout; `energies`, when given, adds a trailing `energy` column.
pub fn write_rollout_csv<W: Write>(result: &RolloutResult, energies: Option<&[f64]>, out: W) -> Result<()> {
    let n = result.states.first().map_or(0, |s| s.dim());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(rollout_header(n, energies.is_some()))?;
    for k in 0..result.times.len() {
        let s = &result.states[k];
        let row = std::iter::once(result.times[k])
            .chain(s.q.iter().copied())
            .chain(s.q_dot.iter().copied())
            .chain([
                result.tips[k].x,
                result.tips[k].y,
                result.references[k].x,
                result.references[k].y,
                result.tip_errors[k],
            ])
            .chain(energies.map(|e| e[k]))
            .map(num);
        w.write_record(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a rollout CSV back; the energy column, if any, is returned separately.
pub fn read_rollout_csv<R: Read>(input: R) -> Result<(RolloutResult, Option<Vec<f64>>)> {
    let table = Table::read(input)?;
    let n = table.indexed_count("q");
    let with_energy = table.column_index("energy").is_some();
    if n == 0 || table.header != rollout_header(n, with_energy) {
        return Err(Error::InvalidCsv(format!(
            "expected rollout header `{}`",
            rollout_header(n.max(1), false).join(",")
        )));
    }
    let q = table.vectors("q", n)?;
    let qd = table.vectors("qd", n)?;
    let states = q
        .into_iter()
        .zip(qd)
        .map(|(q, q_dot)| ConfigurationState { q, q_dot })
        .collect();
    let pair = |a: &str, b: &str| -> Result<Vec<Vector2<f64>>> {
        Ok(table.column(a)?.into_iter().zip(table.column(b)?).map(|(x, y)| Vector2::new(x, y)).collect())
    };
    let tip_errors = table.column("err")?;
    let e_avg = if tip_errors.len() > 1 {
        tip_errors[1..].iter().sum::<f64>() / (tip_errors.len() - 1) as f64
    } else {
        0.0
    };
    let result = RolloutResult {
        times: table.column("t")?,
        states,
        tips: pair("rx", "ry")?,
        references: pair("rx_ref", "ry_ref")?,
        tip_errors,
        e_avg,
    };
    let energy = with_energy.then(|| table.column("energy")).transpose()?;
    Ok((result, energy))
}

pub const TIMING_HEADER: [&str; 3] = ["dt", "t_avg", "speedup"];

pub fn write_timing_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIMING_HEADER)?;
    for p in points {
        w.write_record([p.dt, p.t_avg, p.speedup].map(num))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_timing_csv<R: Read>(input: R) -> Result<Vec<SweepPoint>> {
    let table = Table::read(input)?;
    if table.header != TIMING_HEADER {
        return Err(Error::InvalidCsv(format!("expected timing header `{}`", TIMING_HEADER.join(","))));
    }
    Ok(table
        .rows
        .iter()
        .map(|r| SweepPoint {
            dt: r[0],
            t_avg: r[1],
            speedup: r[2],
        })
        .collect())
}
