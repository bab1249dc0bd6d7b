//! Brute-force checks of the normalized angle solvers: evaluate the residual
//! on a uniform grid over `(α, γ)`, polish every discrete local minimum with
//! Levenberg–Marquardt, and collect the distinct zeros.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::angles::{g4_normalized_residual, g6_reduced_gaps, psi_direct};
use crate::lsq::{levenberg_marquardt, LmOptions};

/// Grid size per axis used by the acceptance checks.
pub const ORACLE_RESOLUTION: usize = 721;
/// Polished points closer than this are the same zero.
pub const DEDUP_TOL: f64 = 1e-6;
/// Largest residual a polished point may keep.
pub const ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub resolution: usize,
    /// Grid nodes that were discrete local minima.
    pub local_minima: usize,
    /// Distinct polished zeros `(α, γ)`, in grid order.
    pub zeros: Vec<[f64; 2]>,
}

impl OracleReport {
    pub fn is_unique(&self) -> bool {
        self.zeros.len() == 1
    }

    /// Distance from `target` to the closest zero.
    pub fn nearest(&self, target: [f64; 2]) -> f64 {
        self.zeros
            .iter()
            .map(|z| libm::hypot(z[0] - target[0], z[1] - target[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// The zero set is a single point within `tol` of `target`.
    pub fn matches(&self, target: [f64; 2], tol: f64) -> bool {
        self.is_unique() && self.nearest(target) <= tol
    }
}

fn complex_residuals(values: &[Complex64]) -> Vec<f64> {
    values.iter().flat_map(|v| [v.re, v.im]).collect()
}

fn search<F: Fn(f64, f64) -> Option<Vec<f64>>>(resolution: usize, f: F) -> OracleReport {
    let n = resolution;
    let h = FRAC_PI_2 / (n + 1) as f64;
    let node = |k: usize| (k + 1) as f64 * h;
    let value = |v: &Option<Vec<f64>>| match v {
        Some(r) if r.iter().all(|x| x.is_finite()) => r.iter().map(|x| x * x).sum::<f64>(),
        _ => f64::INFINITY,
    };
    let grid: Vec<f64> = (0..n * n).map(|ix| value(&f(node(ix / n), node(ix % n)))).collect();
    let at = |i: isize, j: isize| {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            f64::INFINITY
        } else {
            grid[i as usize * n + j as usize]
        }
    };
    let mut zeros: Vec<[f64; 2]> = Vec::new();
    let mut local_minima = 0;
    for i in 0..n as isize {
        for j in 0..n as isize {
            let v = at(i, j);
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            for di in -1..=1 {
                for dj in -1..=1 {
                    if (di, dj) != (0, 0) && at(i + di, j + dj) < v {
                        is_min = false;
                    }
                }
            }
            if !is_min {
                continue;
            }
            local_minima += 1;
            let x0 = [node(i as usize), node(j as usize)];
            let polished = levenberg_marquardt(
                |x: &[f64]| f(x[0], x[1]).unwrap_or_else(|| vec![f64::NAN]),
                &x0,
                LmOptions { tolerance: 1e-14, ..LmOptions::default() },
            );
            if polished.residual.len() < 2 || polished.max_residual() > ZERO_TOL {
                continue;
            }
            let p = [polished.x[0], polished.x[1]];
            if !zeros.iter().any(|z| libm::hypot(z[0] - p[0], z[1] - p[1]) < DEDUP_TOL) {
                zeros.push(p);
            }
        }
    }
    OracleReport { resolution, local_minima, zeros }
}

/// Zeros of the normalized octagon residual over `(α̂, γ̂) ∈ (0, π/2)²`.
pub fn g4_oracle(resolution: usize) -> OracleReport {
    search(resolution, |a, c| {
        if !(a > 0.0 && a < FRAC_PI_2 && c > 0.0 && c < FRAC_PI_2) {
            return None;
        }
        Some(complex_residuals(&[g4_normalized_residual(a, c)]))
    })
}

/// Zeros of `Ψ + 1` (all three, from vertex cross ratios) over the normalized
/// dodecagon gaps `(α, β, γ, γ, β, α)` with `β = π/2 − α − γ`.
pub fn g6_oracle(resolution: usize) -> OracleReport {
    search(resolution, |a, c| {
        let gaps = g6_reduced_gaps(a, c)?;
        let psi = psi_direct(&gaps).ok()?;
        Some(complex_residuals(&psi.map(|p| p + 1.0)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn coarse_g4_oracle_contains_the_symmetric_point() {
        let r = g4_oracle(41);
        assert!(r.nearest([FRAC_PI_4, FRAC_PI_4]) < 1e-6);
        for z in &r.zeros {
            assert!((z[0] + z[1] - FRAC_PI_2).abs() < 1e-8);
        }
    }

    #[test]
    fn coarse_g6_oracle_contains_the_regular_point() {
        let r = g6_oracle(41);
        assert!(r.nearest([PI / 6.0, PI / 6.0]) < 1e-6);
        for z in &r.zeros {
            let (x, y) = (libm::cos(2.0 * z[0]), libm::cos(2.0 * z[1]));
            assert!((5.0 * (x + y) - 4.0 * (x * y + 1.0)).abs() < 1e-8);
        }
    }
}
