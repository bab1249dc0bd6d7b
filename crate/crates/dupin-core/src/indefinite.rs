//! The indefinite inner product of signature `(p, q)` and its orthogonal group.
//!
//! Coordinates are ordered with the `p` positive directions first. For Lie
//! sphere geometry of `S^n` the signature is `(n+1, 2)` and the form matrix is
//! `diag(I_{n+1}, -I_2)`. Transformations act on column vectors.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::Matrix;
use crate::math::unit_f64;
use crate::{Error, Result};

/// Tolerance used when a matrix is validated as a member of `O(p, q)`.
pub const GROUP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    plus: usize,
    minus: usize,
}

impl Signature {
    /// `minus` must be 1 (conformal geometry) or 2 (Lie sphere geometry).
    pub fn new(plus: usize, minus: usize) -> Result<Self> {
        if plus == 0 || !(1..=2).contains(&minus) {
            return Err(Error::InvalidSignature { plus, minus });
        }
        Ok(Signature { plus, minus })
    }

    /// Signature `(n+1, 2)` of the Lie quadric of `S^n`.
    pub fn lie(n: usize) -> Self {
        Signature { plus: n + 1, minus: 2 }
    }

    /// Signature `(2, 1)` of the conformal group of a circle.
    pub fn circle() -> Self {
        Signature { plus: 2, minus: 1 }
    }

    pub fn plus(&self) -> usize {
        self.plus
    }

    pub fn minus(&self) -> usize {
        self.minus
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus
    }

    pub fn sign(&self, i: usize) -> f64 {
        if i < self.plus {
            1.0
        } else {
            -1.0
        }
    }

    /// The form matrix `diag(I_p, -I_q)`.
    pub fn form(&self) -> Matrix {
        let d: Vec<f64> = (0..self.dim()).map(|i| self.sign(i)).collect();
        Matrix::diagonal(&d)
    }

    /// `Σ_{i<p} x_i y_i − Σ_{i≥p} x_i y_i`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        Ok(x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (a, b))| self.sign(i) * a * b)
            .sum())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }
}

/// A coordinate vector tagged with its signature.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedVector {
    signature: Signature,
    coords: Vec<f64>,
}

impl SignedVector {
    pub fn new(signature: Signature, coords: Vec<f64>) -> Result<Self> {
        signature.check_len(coords.len())?;
        Ok(SignedVector { signature, coords })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn inner(&self, other: &SignedVector) -> Result<f64> {
        if self.signature != other.signature {
            return Err(Error::DimensionMismatch {
                expected: self.signature.dim(),
                found: other.signature.dim(),
            });
        }
        self.signature.inner(&self.coords, &other.coords)
    }

    /// Euclidean norm of the coordinates.
    pub fn euclidean_norm(&self) -> f64 {
        crate::math::norm(&self.coords)
    }

    pub fn scaled(&self, s: f64) -> SignedVector {
        SignedVector { signature: self.signature, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SignedVector, b: f64) -> Result<SignedVector> {
        if self.signature != other.signature {
            return Err(Error::DimensionMismatch {
                expected: self.signature.dim(),
                found: other.signature.dim(),
            });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| a * x + b * y).collect();
        Ok(SignedVector { signature: self.signature, coords })
    }
}

/// Result of a membership test for `O(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// Largest entry of `ᵗL·Ī·L − Ī` in absolute value.
    pub residual: f64,
}

/// Largest entry of `ᵗL·Ī·L − Ī`.
pub fn membership_residual(matrix: &Matrix, signature: Signature) -> Result<f64> {
    let n = signature.dim();
    if matrix.rows() != n || matrix.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: matrix.rows().max(matrix.cols()) });
    }
    let form = signature.form();
    let gram = matrix.transpose().mul(&form)?.mul(matrix)?;
    Ok(gram.sub(&form)?.max_abs())
}

pub fn is_lie_transform(matrix: &Matrix, signature: Signature, tol: f64) -> Result<Membership> {
    let residual = membership_residual(matrix, signature)?;
    Ok(Membership { member: residual <= tol, residual })
}

/// An element of `O(p, q)` (for `q = 2`, a Lie sphere transformation).
#[derive(Clone, Debug, PartialEq)]
pub struct LieTransform {
    signature: Signature,
    matrix: Matrix,
}

impl LieTransform {
    /// Validates membership at tolerance [`GROUP_TOL`].
    pub fn new(signature: Signature, matrix: Matrix) -> Result<Self> {
        let m = is_lie_transform(&matrix, signature, GROUP_TOL)?;
        if !m.member {
            return Err(Error::NotInGroup { residual: m.residual });
        }
        Ok(LieTransform { signature, matrix })
    }

    pub fn identity(signature: Signature) -> Self {
        LieTransform { signature, matrix: Matrix::identity(signature.dim()) }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &SignedVector) -> Result<SignedVector> {
        if x.signature() != self.signature {
            return Err(Error::DimensionMismatch {
                expected: self.signature.dim(),
                found: x.signature().dim(),
            });
        }
        SignedVector::new(self.signature, self.matrix.mul_vec(x.coords())?)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &LieTransform) -> Result<LieTransform> {
        if self.signature != other.signature {
            return Err(Error::DimensionMismatch {
                expected: self.signature.dim(),
                found: other.signature.dim(),
            });
        }
        Ok(LieTransform { signature: self.signature, matrix: self.matrix.mul(&other.matrix)? })
    }

    /// `Ī·ᵗL·Ī`, exact for group elements.
    pub fn inverse(&self) -> LieTransform {
        let form = self.signature.form();
        let inv = form
            .mul(&self.matrix.transpose())
            .and_then(|m| m.mul(&form))
            .expect("square matrices of equal size");
        LieTransform { signature: self.signature, matrix: inv }
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant().expect("square matrix")
    }

    pub fn membership_residual(&self) -> f64 {
        membership_residual(&self.matrix, self.signature).expect("dimensions checked at construction")
    }
}

/// Matrix exponential by scaling and squaring: `2^-10` scaling, degree-8
/// Taylor polynomial, ten squarings.
pub fn expm(x: &Matrix) -> Matrix {
    const SQUARINGS: i32 = 10;
    const DEGREE: usize = 8;
    let n = x.rows();
    let y = x.scale(libm::ldexp(1.0, -SQUARINGS));
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=DEGREE {
        term = term.mul(&y).expect("square").scale(1.0 / k as f64);
        sum = sum.add(&term).expect("same shape");
    }
    for _ in 0..SQUARINGS {
        sum = sum.mul(&sum).expect("square");
    }
    sum
}

/// A generator of the Lie algebra of `O(p, q)`: `X = Ī·S` with `S`
/// skew-symmetric, so that `ᵗX·Ī + Ī·X = 0`.
pub fn random_generator(signature: Signature, seed: u64, scale: f64) -> Matrix {
    let n = signature.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = 2.0 * unit_f64(rng.next_u64()) - 1.0;
            s[(i, j)] = v;
            s[(j, i)] = -v;
        }
    }
    let x = signature.form().mul(&s).expect("square");
    let norm = x.frobenius_norm();
    if norm == 0.0 || scale == 0.0 {
        Matrix::zeros(n, n)
    } else {
        x.scale(scale / norm)
    }
}

/// `exp(X)` for a seeded random generator `X` of Frobenius norm `scale`.
/// The same seed always gives the same matrix; `scale = 0` gives the identity.
pub fn random_lie_transform(signature: Signature, seed: u64, scale: f64) -> Result<LieTransform> {
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Error::OutOfRange { name: "scale", value: scale });
    }
    let x = random_generator(signature, seed, scale);
    LieTransform::new(signature, expm(&x))
}
