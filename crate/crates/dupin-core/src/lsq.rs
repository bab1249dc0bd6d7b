//! Levenberg–Marquardt for small nonlinear least-squares problems with a
//! central-difference Jacobian.

use alloc::vec::Vec;

use crate::dense::{solve_linear, Matrix};
use crate::math::norm;

#[derive(Clone, Copy, Debug)]
pub(crate) struct LmOptions {
    pub max_iterations: usize,
    /// Stop once `‖r‖∞` falls below this.
    pub tolerance: f64,
    pub step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions { max_iterations: 200, tolerance: 1e-14, step: 1e-7 }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct LmResult {
    pub x: Vec<f64>,
    pub residual: Vec<f64>,
}

impl LmResult {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn finite(r: &[f64]) -> bool {
    r.iter().all(|v| v.is_finite())
}

pub(crate) fn jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: &F, x: &[f64], m: usize, h: f64) -> Option<Matrix> {
    let n = x.len();
    let mut j = Matrix::zeros(m, n);
    let mut xp = x.to_vec();
    for k in 0..n {
        let orig = xp[k];
        xp[k] = orig + h;
        let fp = f(&xp);
        xp[k] = orig - h;
        let fm = f(&xp);
        xp[k] = orig;
        if fp.len() != m || fm.len() != m || !finite(&fp) || !finite(&fm) {
            return None;
        }
        for i in 0..m {
            j[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Some(j)
}

/// Minimizes `‖f(x)‖²` from `x0`. Non-finite residuals count as rejected
/// steps, so `f` may return NaN outside its domain.
pub(crate) fn levenberg_marquardt<F: Fn(&[f64]) -> Vec<f64>>(f: F, x0: &[f64], opts: LmOptions) -> LmResult {
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let m = r.len();
    let n = x.len();
    let mut mu = 1e-3;
    let mut iterations = 0;
    if !finite(&r) {
        return LmResult { x, residual: r };
    }
    while iterations < opts.max_iterations {
        if r.iter().fold(0.0f64, |a, v| a.max(v.abs())) <= opts.tolerance {
            break;
        }
        iterations += 1;
        let Some(j) = jacobian(&f, &x, m, opts.step) else { break };
        let jt = j.transpose();
        let jtj = jt.mul(&j).expect("shapes agree");
        let g = jt.mul_vec(&r).expect("shapes agree");
        let current = sum_sq(&r);
        let mut accepted = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += mu * (1.0 + jtj[(i, i)]);
            }
            let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
            if let Some(dx) = solve_linear(&a, &rhs) {
                let xn: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
                let rn = f(&xn);
                if rn.len() == m && finite(&rn) && sum_sq(&rn) < current {
                    let small = norm(&dx) <= 1e-16 * (1.0 + norm(&x));
                    x = xn;
                    r = rn;
                    mu = (mu * 0.3).max(1e-15);
                    accepted = !small;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    LmResult { x, residual: r }
}
