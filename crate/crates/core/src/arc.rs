//! Arc functions of a constant-curvature segment with removable singularities
//! at zero curvature.
//!
//! Values switch to a truncated Taylor series below [`SING_EPS`]. The direct
//! derivative formulas cancel in floating point near zero, so derivatives
//! switch at the wider [`DERIVATIVE_EPS`] and carry more series terms.

use crate::error::{Error, Result};

/// Guard radius for the arc functions themselves.
pub const SING_EPS: f64 = 1e-4;

/// Guard radius for first and second derivatives.
pub const DERIVATIVE_EPS: f64 = 0.1;

/// `sin(q)/q`, returning an error on non-finite input.
pub fn arc_sinc(q: f64) -> Result<f64> {
    finite(q)?;
    Ok(sinc(q))
}

/// `(1 - cos q)/q`, returning an error on non-finite input.
pub fn arc_versinc(q: f64) -> Result<f64> {
    finite(q)?;
    Ok(versinc(q))
}

fn finite(q: f64) -> Result<()> {
    if q.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("arc function argument"))
    }
}

#[inline]
pub(crate) fn sinc(q: f64) -> f64 {
    if q.abs() < SING_EPS {
        let q2 = q * q;
        1.0 - q2 / 6.0 + q2 * q2 / 120.0
    } else {
        q.sin() / q
    }
}

#[inline]
pub(crate) fn versinc(q: f64) -> f64 {
    if q.abs() < SING_EPS {
        let q2 = q * q;
        q * (0.5 - q2 / 24.0 + q2 * q2 / 720.0)
    } else {
        let h = (0.5 * q).sin();
        2.0 * h * h / q
    }
}

#[inline]
pub(crate) fn sinc_d1(q: f64) -> f64 {
    if q.abs() < DERIVATIVE_EPS {
        let q2 = q * q;
        q * (-1.0 / 3.0 + q2 * (1.0 / 30.0 + q2 * (-1.0 / 840.0 + q2 * (1.0 / 45_360.0 - q2 / 3_991_680.0))))
    } else {
        (q * q.cos() - q.sin()) / (q * q)
    }
}

#[inline]
pub(crate) fn versinc_d1(q: f64) -> f64 {
    if q.abs() < DERIVATIVE_EPS {
        let q2 = q * q;
        0.5 + q2 * (-1.0 / 8.0 + q2 * (1.0 / 144.0 + q2 * (-1.0 / 5760.0 + q2 * (1.0 / 403_200.0 - q2 / 43_545_600.0))))
    } else {
        let h = (0.5 * q).sin();
        (q * q.sin() - 2.0 * h * h) / (q * q)
    }
}

#[inline]
pub(crate) fn sinc_d2(q: f64) -> f64 {
    if q.abs() < DERIVATIVE_EPS {
        let q2 = q * q;
        -1.0 / 3.0 + q2 * (1.0 / 10.0 + q2 * (-1.0 / 168.0 + q2 * (1.0 / 6480.0 - q2 / 443_520.0)))
    } else {
        ((2.0 - q * q) * q.sin() - 2.0 * q * q.cos()) / (q * q * q)
    }
}

#[inline]
pub(crate) fn versinc_d2(q: f64) -> f64 {
    if q.abs() < DERIVATIVE_EPS {
        let q2 = q * q;
        q * (-0.25 + q2 * (1.0 / 36.0 + q2 * (-1.0 / 960.0 + q2 / 50_400.0)))
    } else {
        let h = (0.5 * q).sin();
        (q * q * q.cos() - 2.0 * q * q.sin() + 4.0 * h * h) / (q * q * q)
    }
}

/// `sin(q/2)/q`, the prismatic extension per unit length of the rigid model.
#[inline]
pub(crate) fn half_sinc(q: f64) -> f64 {
    if q.abs() < SING_EPS {
        let q2 = q * q;
        0.5 - q2 / 48.0 + q2 * q2 / 3840.0
    } else {
        (0.5 * q).sin() / q
    }
}

#[inline]
pub(crate) fn half_sinc_d1(q: f64) -> f64 {
    if q.abs() < DERIVATIVE_EPS {
        let q2 = q * q;
        q * (-1.0 / 24.0 + q2 * (1.0 / 960.0 + q2 * (-1.0 / 107_520.0 + q2 * (1.0 / 23_224_320.0 - q2 / 8_174_960_640.0))))
    } else {
        (q * (0.5 * q).cos() - 2.0 * (0.5 * q).sin()) / (2.0 * q * q)
    }
}

#[inline]
pub(crate) fn half_sinc_d2(q: f64) -> f64 {
    if q.abs() < DERIVATIVE_EPS {
        let q2 = q * q;
        -1.0 / 24.0 + q2 * (1.0 / 320.0 + q2 * (-1.0 / 21_504.0 + q2 / 3_317_760.0))
    } else {
        let (s, c) = (0.5 * q).sin_cos();
        (-0.5 * q * q * s - 2.0 * q * c + 4.0 * s) / (2.0 * q * q * q)
    }
}
