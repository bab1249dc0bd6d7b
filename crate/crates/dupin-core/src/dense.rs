//! Small dense row-major matrices and a one-sided Jacobi SVD.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Build from row-major data.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data: data.to_vec() })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows).map(|i| crate::math::dot(self.row(i), x)).collect())
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::math::norm(&self.data)
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if a[p * n + k] == 0.0 {
                return Ok(0.0);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                if f != 0.0 {
                    for j in k..n {
                        a[i * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        Ok(det)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a rank-revealing decomposition.
#[derive(Clone, Debug)]
pub struct Kernel {
    /// Singular values in decreasing order (`min(rows, cols)` of them, padded
    /// with zeros when there are more columns than rows).
    pub singular_values: Vec<f64>,
    /// Threshold below which a singular value counts as zero.
    pub threshold: f64,
    /// Orthonormal basis of the null space, one vector per entry.
    pub basis: Vec<Vec<f64>>,
    /// Singular values within a factor `1e3` of the threshold on either side.
    pub near_threshold: Vec<f64>,
}

impl Kernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.singular_values.iter().filter(|s| **s > self.threshold).count()
    }
}

/// Null space of `a` by one-sided Jacobi SVD, with zero threshold
/// `rel_tol · σ_max`.
pub fn kernel(a: &Matrix, rel_tol: f64) -> Kernel {
    let (m, n) = (a.rows(), a.cols());
    // columns of `w` converge to U·Σ, `v` accumulates the rotations
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = crate::math::dot(&w[p], &w[p]);
                let beta = crate::math::dot(&w[q], &w[q]);
                let gamma = crate::math::dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for k in 0..m {
                    let (x, y) = (w[p][k], w[q][k]);
                    w[p][k] = c * x - s * y;
                    w[q][k] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (v[p][k], v[q][k]);
                    v[p][k] = c * x - s * y;
                    v[q][k] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> =
        (0..n).map(|j| (crate::math::norm(&w[j]), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let sigma_max = order.first().map_or(0.0, |x| x.0);
    let threshold = rel_tol * sigma_max;
    let keep = m.min(n);
    let mut singular_values: Vec<f64> = order.iter().take(keep).map(|x| x.0).collect();
    singular_values.resize(keep, 0.0);
    let mut basis = Vec::new();
    let mut near = Vec::new();
    for (rank_pos, (s, j)) in order.iter().enumerate() {
        let zero = rank_pos >= keep || *s <= threshold || sigma_max == 0.0;
        if zero {
            basis.push(v[*j].clone());
        }
        if sigma_max > 0.0 && *s > threshold * 1e-3 && *s < threshold * 1e3 {
            near.push(*s);
        }
    }
    Kernel { singular_values, threshold, basis, near_threshold: near }
}

/// Solve the 2×2 system `[[a, b], [c, d]]·x = r`.
pub(crate) fn solve2(m: [[f64; 2]; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    if det.abs() <= 1e-300 || det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some([
        (r[0] * m[1][1] - m[0][1] * r[1]) / det,
        (m[0][0] * r[1] - m[1][0] * r[0]) / det,
    ])
}

/// Solve the square system `a·x = b` by Gaussian elimination with partial
/// pivoting. `None` when a pivot falls below `1e-14` relative to the largest
/// entry.
pub fn solve_linear(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return None;
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return None;
    }
    let mut m = a.data.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i * n + k].abs().total_cmp(&m[j * n + k].abs()))?;
        if m[p * n + k].abs() <= 1e-14 * scale {
            return None;
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            if f != 0.0 {
                for j in k..n {
                    m[i * n + j] -= f * m[k * n + j];
                }
                x[i] -= f * x[k];
            }
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k * n + j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k * n + k];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_permutation_and_triangular() {
        let p = Matrix::from_row_slice(3, 3, &[0., 1., 0., 1., 0., 0., 0., 0., 1.]).unwrap();
        assert_eq!(p.determinant().unwrap(), -1.0);
        let t = Matrix::from_row_slice(3, 3, &[2., 5., 7., 0., 3., 1., 0., 0., 4.]).unwrap();
        assert!((t.determinant().unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn solve_linear_recovers_solution() {
        let a = Matrix::from_row_slice(3, 3, &[0., 2., 1., 1., 1., 0., 3., 0., 4.]).unwrap();
        let x = [1.5, -2.0, 0.25];
        let b = a.mul_vec(&x).unwrap();
        let y = solve_linear(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-14);
        }
        assert!(solve_linear(&Matrix::zeros(2, 2), &[1.0, 1.0]).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = Matrix::from_row_slice(2, 3, &[1., 2., 3., 2., 4., 6.]).unwrap();
        let k = kernel(&a, 1e-9);
        assert_eq!(k.dimension(), 2);
        for b in &k.basis {
            let r = a.mul_vec(b).unwrap();
            assert!(crate::math::norm(&r) < 1e-12);
        }
    }

    #[test]
    fn kernel_of_zero_row_matrix_is_everything() {
        let a = Matrix::zeros(0, 4);
        assert_eq!(kernel(&a, 1e-9).dimension(), 4);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = Matrix::diagonal(&[3.0, -5.0, 0.5]);
        let k = kernel(&a, 1e-9);
        assert_eq!(k.dimension(), 0);
        let s = &k.singular_values;
        assert!((s[0] - 5.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14 && (s[2] - 0.5).abs() < 1e-14);
    }
}
