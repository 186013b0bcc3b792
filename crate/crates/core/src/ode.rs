//! Adaptive Dormand–Prince 5(4) integrator with 4th-order dense output.

use nalgebra::DVector;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Mixed relative/absolute local error tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-8, abs: 1e-10 }
    }
}

impl Tolerances {
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }
}

/// Continuous extension of one accepted step.
struct DenseStep {
    t0: f64,
    h: f64,
    r1: DVector<f64>,
    r2: DVector<f64>,
    r3: DVector<f64>,
    r4: DVector<f64>,
    r5: DVector<f64>,
}

impl DenseStep {
    fn eval(&self, t: f64) -> DVector<f64> {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        &self.r1 + (&self.r2 + (&self.r3 + (&self.r4 + &self.r5 * th1) * th) * th1) * th
    }
}

/// Stateful driver; remembers its step size between calls so a sequence of
/// short [`Dopri5::advance`] calls does not restart from scratch.
#[derive(Clone, Debug)]
pub struct Dopri5 {
    pub tol: Tolerances,
    pub max_steps: usize,
    h: Option<f64>,
    accepted: usize,
    rejected: usize,
}

impl Dopri5 {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol,
            max_steps: 1_000_000,
            h: None,
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    /// Solves from `t0` and returns the state at each of `times` (ascending,
    /// none before `t0`) from the dense output.
    pub fn integrate<F>(&mut self, mut f: F, t0: f64, x0: &DVector<f64>, times: &[f64]) -> Result<Vec<DVector<f64>>>
    where
        F: FnMut(f64, &DVector<f64>) -> Result<DVector<f64>>,
    {
        if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
            return Err(Error::InvalidSpec("output times must be ascending from t0".into()));
        }
        let mut out = Vec::with_capacity(times.len());
        let mut next = 0;
        while next < times.len() && times[next] == t0 {
            out.push(x0.clone());
            next += 1;
        }
        let Some(&t_end) = times.last() else {
            return Ok(out);
        };
        if next == times.len() {
            return Ok(out);
        }
        self.drive(&mut f, t0, x0.clone(), t_end, |dense, t1, x1| {
            while next < times.len() && times[next] <= t1 {
                let t = times[next];
                out.push(if t == t1 { x1.clone() } else { dense.eval(t) });
                next += 1;
            }
        })?;
        Ok(out)
    }

    /// Solves from `t0` to exactly `t_end`; the last step is shortened to
    /// land on it.
    pub fn advance<F>(&mut self, mut f: F, t0: f64, x0: &DVector<f64>, t_end: f64) -> Result<DVector<f64>>
    where
        F: FnMut(f64, &DVector<f64>) -> Result<DVector<f64>>,
    {
        if t_end < t0 {
            return Err(Error::InvalidSpec("cannot integrate backwards".into()));
        }
        if t_end == t0 {
            return Ok(x0.clone());
        }
        self.drive(&mut f, t0, x0.clone(), t_end, |_, _, _| {})
    }

    fn error_norm(&self, x0: &DVector<f64>, x1: &DVector<f64>, err: &DVector<f64>) -> f64 {
        let n = x0.len().max(1) as f64;
        let sum: f64 = err
            .iter()
            .zip(x0.iter().zip(x1.iter()))
            .map(|(e, (a, b))| {
                let sc = self.tol.abs + self.tol.rel * a.abs().max(b.abs());
                (e / sc).powi(2)
            })
            .sum();
        (sum / n).sqrt()
    }

    fn initial_step<F>(&self, f: &mut F, t0: f64, x0: &DVector<f64>, k1: &DVector<f64>, span: f64) -> Result<f64>
    where
        F: FnMut(f64, &DVector<f64>) -> Result<DVector<f64>>,
    {
        let scale = |x: &DVector<f64>, v: &DVector<f64>| -> f64 {
            let n = x.len().max(1) as f64;
            (x.iter()
                .zip(v.iter())
                .map(|(xi, vi)| (vi / (self.tol.abs + self.tol.rel * xi.abs())).powi(2))
                .sum::<f64>()
                / n)
                .sqrt()
        };
        let d0 = scale(x0, x0);
        let d1 = scale(x0, k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let x1 = x0 + k1 * h0;
        let k2 = f(t0 + h0, &x1)?;
        let d2 = scale(x0, &(k2 - k1)) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok((100.0 * h0).min(h1).min(span))
    }

    fn drive<F, O>(&mut self, f: &mut F, t0: f64, mut x: DVector<f64>, t_end: f64, mut on_step: O) -> Result<DVector<f64>>
    where
        F: FnMut(f64, &DVector<f64>) -> Result<DVector<f64>>,
        O: FnMut(&DenseStep, f64, &DVector<f64>),
    {
        let mut t = t0;
        let mut k1 = f(t, &x)?;
        let span = t_end - t0;
        let mut h = match self.h {
            Some(h) => h.min(span),
            None => self.initial_step(f, t0, &x, &k1, span)?,
        };
        let mut steps = 0;
        loop {
            let remaining = t_end - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let hs = if last { remaining } else { h };
            let h_min = 1e-14 * t.abs().max(1.0);
            if hs < h_min || steps >= self.max_steps {
                return Err(Error::StepSizeUnderflow { t });
            }
            steps += 1;

            let k2 = f(t + C2 * hs, &(&x + &k1 * (A21 * hs)))?;
            let k3 = f(t + C3 * hs, &(&x + (&k1 * A31 + &k2 * A32) * hs))?;
            let k4 = f(t + C4 * hs, &(&x + (&k1 * A41 + &k2 * A42 + &k3 * A43) * hs))?;
            let k5 = f(
                t + C5 * hs,
                &(&x + (&k1 * A51 + &k2 * A52 + &k3 * A53 + &k4 * A54) * hs),
            )?;
            let k6 = f(
                t + hs,
                &(&x + (&k1 * A61 + &k2 * A62 + &k3 * A63 + &k4 * A64 + &k5 * A65) * hs),
            )?;
            let x1 = &x + (&k1 * A71 + &k3 * A73 + &k4 * A74 + &k5 * A75 + &k6 * A76) * hs;
            let t1 = if last { t_end } else { t + hs };
            let k7 = f(t1, &x1)?;

            let err = (&k1 * E1 + &k3 * E3 + &k4 * E4 + &k5 * E5 + &k6 * E6 + &k7 * E7) * hs;
            let norm = self.error_norm(&x, &x1, &err);
            if !norm.is_finite() {
                self.rejected += 1;
                h = hs * MIN_FACTOR;
                continue;
            }
            let factor = if norm == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if norm <= 1.0 {
                self.accepted += 1;
                let r2 = &x1 - &x;
                let r3 = &k1 * hs - &r2;
                let r4 = &r2 - &k7 * hs - &r3;
                let r5 = (&k1 * D1 + &k3 * D3 + &k4 * D4 + &k5 * D5 + &k6 * D6 + &k7 * D7) * hs;
                let dense = DenseStep {
                    t0: t,
                    h: hs,
                    r1: x.clone(),
                    r2,
                    r3,
                    r4,
                    r5,
                };
                on_step(&dense, t1, &x1);
                t = t1;
                x = x1;
                k1 = k7;
                // a clipped final step says nothing about the natural size
                if !last || hs >= h {
                    h = hs * factor;
                }
                self.h = Some(h);
                if last {
                    return Ok(x);
                }
            } else {
                self.rejected += 1;
                h = hs * factor.min(1.0);
            }
        }
    }
}
