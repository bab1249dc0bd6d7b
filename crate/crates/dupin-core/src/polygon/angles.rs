//! The complex equations satisfied by the odd gaps when a Lie curvature of the
//! octagon or dodecagon takes its isoparametric value, and their solutions
//! under the antipodal normalization.
//!
//! The normalizations leave a one-parameter family of solutions in both cases:
//! the `g = 4` residual vanishes on the line `α̂ + γ̂ = π/2`, and the `g = 6`
//! system on the curve `5(x + y) = 4(xy + 1)` with `x = cos 2α`, `y = cos 2γ`.
//! Each is the orbit of the regular polygon under the boosts that keep the
//! normalization, so the solvers pick the symmetric representative and the
//! families are exposed separately.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::AngleGaps;
use crate::lie_sphere::cross_ratio;
use crate::{Error, Result};

fn e2i(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * x)
}

/// `2(1 + e^{2i(α+γ)}) − e^{2iα} − e^{2iγ} − e^{−2iδ} − e^{−2iβ}` for one gap
/// sequence `(α, β, γ, δ)`.
pub fn g4_residual_of(gaps: [f64; 4]) -> Complex64 {
    let [al, be, ga, de] = gaps;
    2.0 * (1.0 + e2i(al + ga)) - e2i(al) - e2i(ga) - e2i(-de) - e2i(-be)
}

/// The residual for the odd gaps; zero exactly when `Φ = −1` holds at `p¹`.
pub fn g4_residual(gaps: &AngleGaps) -> Result<Complex64> {
    if gaps.g() != 4 {
        return Err(Error::UnsupportedG(gaps.g()));
    }
    let o = gaps.odd();
    Ok(g4_residual_of([o[0], o[1], o[2], o[3]]))
}

/// Residual under `α̂ + β̂ = π/2 = γ̂ + δ̂`; equals `2(1 + e^{2i(α̂+γ̂)})`.
pub fn g4_normalized_residual(alpha: f64, gamma: f64) -> Complex64 {
    g4_residual_of([alpha, FRAC_PI_2 - alpha, gamma, FRAC_PI_2 - gamma])
}

/// The normalized solutions: gaps `(α̂, π/2 − α̂, π/2 − α̂, α̂)` in both rows.
pub fn g4_normalized_family(alpha: f64) -> Result<AngleGaps> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha });
    }
    let row = vec![alpha, FRAC_PI_2 - alpha, FRAC_PI_2 - alpha, alpha];
    AngleGaps::new(row.clone(), row)
}

/// Under the normalization the residual reduces to `1 + e^{2i(α̂+γ̂)} = 0`,
/// whose only root with `0 < α̂ + γ̂ < π` is `α̂ + γ̂ = π/2`. Among those, the
/// returned gaps are the ones fixed by `α̂ ↔ β̂`, i.e. all `π/4`.
pub fn solve_g4_normalized() -> AngleGaps {
    let alpha = FRAC_PI_2 / 2.0;
    let gamma = FRAC_PI_2 - alpha;
    let row = vec![alpha, FRAC_PI_2 - alpha, gamma, FRAC_PI_2 - gamma];
    AngleGaps::new(row.clone(), row).expect("π/4 gaps are valid")
}

fn check_g6_normalized(gaps: &AngleGaps) -> Result<()> {
    if gaps.g() != 6 {
        return Err(Error::UnsupportedG(gaps.g()));
    }
    let o = gaps.odd();
    if (o[0] + o[1] + o[2] - FRAC_PI_2).abs() > 1e-10 {
        return Err(Error::InvalidGaps("expected α + β + γ = π/2"));
    }
    Ok(())
}

/// `[Ψ¹, Ψ⁵, Ψ¹¹]` from the closed forms in `w_k = e^{2i·gap_k}`; only valid
/// when `α + β + γ = π/2`.
pub fn psi_closed_forms(gaps: &AngleGaps) -> Result<[Complex64; 3]> {
    check_g6_normalized(gaps)?;
    let w = gaps.odd_phases();
    let one = Complex64::new(1.0, 0.0);
    let (w1, w2, w3, w4, w5, w6) = (w[0], w[1], w[2], w[3], w[4], w[5]);
    Ok([
        (one - w1) * (one - w3 * w4) / ((one + w4) * (one + w1 * w3)),
        (one - w3) * (one - w5 * w6) / ((one + w3) * (one + w5 * w6)),
        (one - w6) * (one - w2 * w3) / ((one + w6) * (one + w2 * w3)),
    ])
}

/// The same three values as cross ratios `[z₂,z₆;z₄,z₁₀]`, `[z₆,z₁₀;z₈,z₂]`,
/// `[z₁₂,z₄;z₂,z₈]` of the even vertices, `z₂ = 1`, `z_{2k+2} = w_k z_{2k}`.
pub fn psi_direct(gaps: &AngleGaps) -> Result<[Complex64; 3]> {
    if gaps.g() != 6 {
        return Err(Error::UnsupportedG(gaps.g()));
    }
    let w = gaps.odd_phases();
    let mut z = vec![Complex64::new(1.0, 0.0)];
    for k in 0..5 {
        let next = z[k] * w[k];
        z.push(next);
    }
    let at = |t: usize| z[t / 2 - 1];
    Ok([
        cross_ratio(at(2), at(6), at(4), at(10))?,
        cross_ratio(at(6), at(10), at(8), at(2))?,
        cross_ratio(at(12), at(4), at(2), at(8))?,
    ])
}

/// `[Ψ¹, Ψ⁵, Ψ¹¹]`, evaluated both ways; errors if the two disagree by more
/// than `1e−10`.
pub fn psi_values(gaps: &AngleGaps) -> Result<[f64; 3]> {
    let closed = psi_closed_forms(gaps)?;
    let direct = psi_direct(gaps)?;
    for (c, d) in closed.iter().zip(&direct) {
        if (c - d).norm() > 1e-10 * (1.0 + d.norm()) {
            return Err(Error::InconsistentData("closed forms disagree with cross ratios"));
        }
    }
    Ok(direct.map(|v| v.re))
}

/// `2(w₁w₃ + 1) − (w₁ + w₃)`; zero is `Ψ¹ = −1` once `w₃ = w₄` and `w₁ = w₆`.
pub fn g6_reduced_residual(w1: Complex64, w3: Complex64) -> Complex64 {
    2.0 * (w1 * w3 + 1.0) - (w1 + w3)
}

/// `[(x + y)F, (x − y)F]` with `F = 5(x + y) − 4(xy + 1)`.
pub fn g6_xy_system(x: f64, y: f64) -> [f64; 2] {
    let f = 5.0 * (x + y) - 4.0 * (x * y + 1.0);
    [(x + y) * f, (x - y) * f]
}

/// Which factor of [`g6_xy_system`] a candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G6Branch {
    /// `x + y = 0` and `x − y = 0`.
    BothLinear,
    /// `x + y = 0`, `x ≠ y`, so `F = 4(x² − 1) = 0`.
    AntiDiagonal,
    /// `x = y`, `x + y ≠ 0`, so `F = −2(2x − 1)(x − 2) = 0`.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct G6Candidate {
    pub branch: G6Branch,
    pub x: f64,
    pub y: f64,
    pub accepted: bool,
    pub reason: &'static str,
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * libm::sqrt(disc));
    let mut r = vec![q / a, c / q];
    r.sort_by(f64::total_cmp);
    r
}

fn admissible(x: f64, y: f64) -> (bool, &'static str) {
    if x.abs() >= 1.0 || y.abs() >= 1.0 {
        return (false, "cos 2α and cos 2γ must lie in (−1, 1)");
    }
    let beta = FRAC_PI_2 - (libm::acos(x) + libm::acos(y)) / 2.0;
    if beta <= 0.0 {
        return (false, "β = π/2 − α − γ must be positive");
    }
    (true, "admissible")
}

/// The candidates from each branch of the factored system, in order, with
/// the reason each was kept or rejected.
pub fn g6_case_analysis() -> Vec<G6Candidate> {
    let mut out = Vec::new();
    let (ok, reason) = admissible(0.0, 0.0);
    out.push(G6Candidate { branch: G6Branch::BothLinear, x: 0.0, y: 0.0, accepted: ok, reason });
    // 4(x² − 1) = 0
    for x in quadratic_roots(4.0, 0.0, -4.0) {
        let (ok, reason) = admissible(x, -x);
        out.push(G6Candidate { branch: G6Branch::AntiDiagonal, x, y: -x, accepted: ok, reason });
    }
    // −4x² + 10x − 4 = 0
    for x in quadratic_roots(-4.0, 10.0, -4.0) {
        let (ok, reason) = admissible(x, x);
        out.push(G6Candidate { branch: G6Branch::Diagonal, x, y: x, accepted: ok, reason });
    }
    out
}

fn g6_gaps_from(alpha: f64, gamma: f64) -> Result<AngleGaps> {
    let beta = FRAC_PI_2 - alpha - gamma;
    let row = vec![alpha, beta, gamma, gamma, beta, alpha];
    AngleGaps::new(row.clone(), row)
}

/// Imposes `Ψ⁵ = Ψ¹¹ = −1` (giving `γ = δ`, `α = η`, `β = ζ`), then `Ψ¹ = −1`,
/// and takes the one admissible candidate of [`g6_case_analysis`]: all gaps
/// `π/6`. The same applies to the even gaps.
pub fn solve_g6_normalized() -> AngleGaps {
    let accepted: Vec<G6Candidate> = g6_case_analysis().into_iter().filter(|c| c.accepted).collect();
    let c = accepted[0];
    let alpha = libm::acos(c.x) / 2.0;
    let gamma = libm::acos(c.y) / 2.0;
    g6_gaps_from(alpha, gamma).expect("admissible candidate")
}

/// The solutions missed by the factor analysis: for `x = cos 2α`, the point
/// `y = (4 − 5x)/(5 − 4x)` of `F = 0`, with gaps `(α, β, γ, γ, β, α)`.
/// `None` when `β` would not be positive.
pub fn g6_normalized_family(alpha: f64) -> Option<AngleGaps> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return None;
    }
    let x = libm::cos(2.0 * alpha);
    let y = (4.0 - 5.0 * x) / (5.0 - 4.0 * x);
    let gamma = libm::acos(y) / 2.0;
    if !(FRAC_PI_2 - alpha - gamma > 0.0) {
        return None;
    }
    g6_gaps_from(alpha, gamma).ok()
}

/// `(α, γ)` of the normalized `g = 6` gaps `(α, π/2 − α − γ, γ, γ, π/2 − α − γ, α)`,
/// or `None` outside the open triangle.
pub(crate) fn g6_reduced_gaps(alpha: f64, gamma: f64) -> Option<AngleGaps> {
    if !(alpha > 0.0 && gamma > 0.0 && alpha + gamma < FRAC_PI_2) {
        return None;
    }
    g6_gaps_from(alpha, gamma).ok()
}
