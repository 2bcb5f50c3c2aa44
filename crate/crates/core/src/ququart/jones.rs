//! Jones calculus for waveplates, expressed on the helicity qubit.
//!
//! Plates are defined in the linear (H, V) basis and conjugated into the
//! circular basis `L = (1, i)/sqrt2`, `R = (1, -i)/sqrt2`, which is the Q_b
//! ordering (b = 0 for L). Each matrix is scaled to unit determinant.

use crate::linalg::{c, from_rows, r, CMat, C64, ONE, ZERO};

fn rot(theta: f64) -> CMat {
    let (s, co) = theta.sin_cos();
    from_rows(2, 2, &[r(co), r(-s), r(s), r(co)])
}

fn retarder_linear(theta: f64, phase: C64) -> CMat {
    rot(theta) * from_rows(2, 2, &[ONE, ZERO, ZERO, phase]) * rot(-theta)
}

fn det_normalize(m: CMat) -> CMat {
    let d = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let s = d.sqrt();
    m / s
}

/// Columns are the L and R Jones vectors.
fn circular_frame() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    from_rows(2, 2, &[r(h), r(h), c(0.0, h), c(0.0, -h)])
}

pub fn to_circular(linear: &CMat) -> CMat {
    let t = circular_frame();
    t.adjoint() * linear * t
}

/// Half-wave plate with fast axis at `theta` radians, linear basis.
pub fn hwp_linear(theta: f64) -> CMat {
    det_normalize(retarder_linear(theta, r(-1.0)))
}

/// Quarter-wave plate with fast axis at `theta` radians, linear basis.
pub fn qwp_linear(theta: f64) -> CMat {
    det_normalize(retarder_linear(theta, c(0.0, 1.0)))
}

pub fn hwp(theta_deg: f64) -> CMat {
    det_normalize(to_circular(&hwp_linear(theta_deg.to_radians())))
}

pub fn qwp(theta_deg: f64) -> CMat {
    det_normalize(to_circular(&qwp_linear(theta_deg.to_radians())))
}

/// `QWP(45) HWP(0) QWP(45)` in the circular basis.
pub fn compensated_flip() -> CMat {
    det_normalize(qwp(45.0) * hwp(0.0) * qwp(45.0))
}
