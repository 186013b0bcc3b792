#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use pcc_flat::io::{load_params, load_spec};
use pcc_flat::{tip_jacobian, RobotParams, SplineSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FD_STEP: f64 = 1e-6;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn params() -> RobotParams {
    load_params(&data("params.json")).unwrap()
}

pub fn spec(name: &str) -> SplineSpec {
    load_spec(&data(&format!("trajectory_{name}.json"))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(lo..hi))
}

/// Curvatures away from the straight-arm and folded singularities of the tip map.
pub fn nonsingular(rng: &mut ChaCha8Rng, params: &RobotParams, lo: f64, hi: f64) -> DVector<f64> {
    loop {
        let q = uniform(rng, params.segments(), lo, hi);
        let j = tip_jacobian(&q, params).unwrap();
        let det = j.fixed_columns::<2>(0).determinant().abs();
        if det > 1e-2 * j.norm_squared() {
            return q;
        }
    }
}

/// Central difference of a matrix-valued map along coordinate `i`.
pub fn central_diff<F>(f: F, q: &DVector<f64>, i: usize) -> DMatrix<f64>
where
    F: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    let mut plus = q.clone();
    let mut minus = q.clone();
    plus[i] += FD_STEP;
    minus[i] -= FD_STEP;
    (f(&plus) - f(&minus)) / (2.0 * FD_STEP)
}

/// `‖a − b‖ / max(‖a‖, floor)`.
pub fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(floor)
}
