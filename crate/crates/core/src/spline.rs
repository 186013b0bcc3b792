//! Natural cubic spline through planar control points.

use nalgebra::Vector2;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct NaturalSpline {
    knots: Vec<f64>,
    values: Vec<Vector2<f64>>,
    /// Second derivatives at the knots; zero at both ends.
    curvature: Vec<Vector2<f64>>,
}

impl NaturalSpline {
    /// Spline with knots evenly spaced on `[0, 1]`.
    pub fn uniform(points: &[Vector2<f64>]) -> Result<Self> {
        let m = points.len();
        if m < 2 {
            return Err(Error::InvalidSpec(format!(
                "a spline needs at least 2 control points, got {m}"
            )));
        }
        let knots = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
        Self::new(knots, points.to_vec())
    }

    pub fn new(knots: Vec<f64>, values: Vec<Vector2<f64>>) -> Result<Self> {
        let m = values.len();
        if m < 2 || knots.len() != m {
            return Err(Error::InvalidSpec("spline needs matching knots and ≥ 2 points".into()));
        }
        if knots.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::InvalidSpec("spline knots must increase strictly".into()));
        }
        if values.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(Error::NonFinite("control point"));
        }
        let curvature = solve_curvature(&knots, &values);
        Ok(Self {
            knots,
            values,
            curvature,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    pub fn eval(&self, s: f64) -> Vector2<f64> {
        let (lo, hi) = self.domain();
        let s = s.clamp(lo, hi);
        let i = match self.knots.partition_point(|&k| k <= s) {
            0 => 0,
            p => (p - 1).min(self.knots.len() - 2),
        };
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - s) / h;
        let b = (s - self.knots[i]) / h;
        self.values[i] * a
            + self.values[i + 1] * b
            + (self.curvature[i] * (a * a * a - a) + self.curvature[i + 1] * (b * b * b - b)) * (h * h / 6.0)
    }
}

/// Thomas algorithm for the natural-spline moment equations.
fn solve_curvature(knots: &[f64], values: &[Vector2<f64>]) -> Vec<Vector2<f64>> {
    let m = values.len();
    let mut out = vec![Vector2::zeros(); m];
    if m < 3 {
        return out;
    }
    let inner = m - 2;
    let mut diag = vec![0.0; inner];
    let mut upper = vec![0.0; inner];
    let mut rhs = vec![Vector2::zeros(); inner];
    for r in 0..inner {
        let i = r + 1;
        let h0 = knots[i] - knots[i - 1];
        let h1 = knots[i + 1] - knots[i];
        diag[r] = 2.0 * (h0 + h1);
        upper[r] = h1;
        rhs[r] = ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0) * 6.0;
    }
    // forward sweep; the sub-diagonal entry of row r is h0 = upper[r - 1]
    for r in 1..inner {
        let w = upper[r - 1] / diag[r - 1];
        diag[r] -= w * upper[r - 1];
        let prev = rhs[r - 1];
        rhs[r] -= prev * w;
    }
    out[inner] = rhs[inner - 1] / diag[inner - 1];
    for r in (0..inner - 1).rev() {
        out[r + 1] = (rhs[r] - out[r + 2] * upper[r]) / diag[r];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[[f64; 2]]) -> Vec<Vector2<f64>> {
        xs.iter().map(|p| Vector2::new(p[0], p[1])).collect()
    }

    #[test]
    fn two_points_are_a_line() {
        let s = NaturalSpline::uniform(&pts(&[[0.0, 1.0], [2.0, 3.0]])).unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((s.eval(t) - Vector2::new(2.0 * t, 1.0 + 2.0 * t)).amax() < 1e-15);
        }
    }

    #[test]
    fn interpolates_control_points() {
        let p = pts(&[[0.2, 0.1], [0.1, 0.17], [0.04, 0.17], [0.03, 0.16], [0.1, 0.0]]);
        let s = NaturalSpline::uniform(&p).unwrap();
        for (i, q) in p.iter().enumerate() {
            assert!((s.eval(i as f64 / 4.0) - q).amax() < 1e-15);
        }
    }

    #[test]
    fn natural_end_conditions_and_smoothness() {
        let p = pts(&[[0.0, 0.0], [1.0, 2.0], [2.0, -1.0], [3.0, 0.5]]);
        let s = NaturalSpline::uniform(&p).unwrap();
        let h = 1e-4;
        let second = |t: f64| (s.eval(t + h) - 2.0 * s.eval(t) + s.eval(t - h)) / (h * h);
        assert!(second(h).amax() < 1e-2 * second(0.5).amax().max(1.0));
        // C1 across an interior knot
        let t = 1.0 / 3.0;
        let left = (s.eval(t) - s.eval(t - h)) / h;
        let right = (s.eval(t + h) - s.eval(t)) / h;
        assert!((left - right).amax() < 1e-2);
    }

    #[test]
    fn reproduces_a_cubic_with_zero_end_curvature() {
        // x(s) = s is linear, natural spline reproduces it exactly
        let p: Vec<_> = (0..6).map(|i| Vector2::new(i as f64 / 5.0, 1.0 - i as f64 / 5.0)).collect();
        let s = NaturalSpline::uniform(&p).unwrap();
        assert!((s.eval(0.37) - Vector2::new(0.37, 0.63)).amax() < 1e-15);
    }

    #[test]
    fn rejects_single_point() {
        assert!(NaturalSpline::uniform(&pts(&[[0.0, 0.0]])).is_err());
    }
}
