use core::f64::consts::{PI, TAU};

pub(crate) fn cot(x: f64) -> f64 {
    libm::cos(x) / libm::sin(x)
}

/// Angle in `(0, π)` with the given cotangent.
pub(crate) fn arccot(x: f64) -> f64 {
    libm::atan2(1.0, x)
}

/// Reduce to `[0, 2π)`.
pub(crate) fn wrap_tau(x: f64) -> f64 {
    let r = x % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce to `(-π, π]`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let r = wrap_tau(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Uniform sample in `[0, 1)` from 53 random bits.
pub(crate) fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
