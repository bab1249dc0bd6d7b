//! Conformal maps of the geodesic circle, realised as `O(2,1)` acting on
//! `(p, 1)` with `p` a unit vector of the plane.
//!
//! A map with bottom row `(x, y, α̌)` sends the contact element `(p, n)` to one
//! whose principal curvatures are `a·λ + c` with `a = x p₁ + y p₂ + α̌` and
//! `c = x n₁ + y n₂`. Lie curvatures are unchanged because the map is affine in
//! `λ`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use super::{check_polygon_g, is_parallel, GeodesicPolygon};
use crate::dense::{solve2, Matrix};
use crate::indefinite::{is_lie_transform, Signature, GROUP_TOL};
use crate::math::{arccot, cot, wrap_pi};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CircleMobius {
    matrix: Matrix,
}

impl CircleMobius {
    /// Validates membership in `O(2,1)` at `1e−9`. The map must also preserve
    /// the orientation of the circle and the sign of the last coordinate.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let m = is_lie_transform(&matrix, Signature::circle(), GROUP_TOL)?;
        if !m.member {
            return Err(Error::NotInGroup { residual: m.residual });
        }
        if matrix[(2, 2)] <= 0.0 || matrix.determinant()? <= 0.0 {
            return Err(Error::InvalidPolygon("map reverses orientation"));
        }
        Ok(CircleMobius { matrix })
    }

    pub fn identity() -> Self {
        CircleMobius { matrix: Matrix::identity(3) }
    }

    pub fn rotation(psi: f64) -> Self {
        let (s, c) = (libm::sin(psi), libm::cos(psi));
        let m = Matrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]).expect("3×3");
        CircleMobius { matrix: m }
    }

    /// Boost with rapidity `|b|` along `b/|b|`. Its bottom row is
    /// `(sinh|b|·b̂, cosh|b|)`.
    pub fn boost(b1: f64, b2: f64) -> Self {
        let r = libm::hypot(b1, b2);
        if r == 0.0 {
            return CircleMobius::identity();
        }
        let (u1, u2) = (b1 / r, b2 / r);
        let (ch, sh) = (libm::cosh(r), libm::sinh(r));
        let m = Matrix::from_row_slice(
            3,
            3,
            &[
                1.0 + (ch - 1.0) * u1 * u1,
                (ch - 1.0) * u1 * u2,
                sh * u1,
                (ch - 1.0) * u1 * u2,
                1.0 + (ch - 1.0) * u2 * u2,
                sh * u2,
                sh * u1,
                sh * u2,
                ch,
            ],
        )
        .expect("3×3");
        CircleMobius { matrix: m }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CircleMobius) -> CircleMobius {
        CircleMobius { matrix: self.matrix.mul(&other.matrix).expect("3×3") }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn x(&self) -> f64 {
        self.matrix[(2, 0)]
    }

    pub fn y(&self) -> f64 {
        self.matrix[(2, 1)]
    }

    pub fn alpha_check(&self) -> f64 {
        self.matrix[(2, 2)]
    }

    /// Image of the point at angle `phi`, as an angle.
    pub fn apply_angle(&self, phi: f64) -> f64 {
        let v = self.matrix.mul_vec(&[libm::cos(phi), libm::sin(phi), 1.0]).expect("3 entries");
        libm::atan2(v[1], v[0])
    }

    /// `(a, c)` for the contact element at angle `phi` with normal
    /// orientation `sigma`.
    pub fn curvature_coefficients(&self, phi: f64, sigma: f64) -> (f64, f64) {
        let (s, c) = (libm::sin(phi), libm::cos(phi));
        let a = self.x() * c + self.y() * s + self.alpha_check();
        let cc = sigma * (-self.x() * s + self.y() * c);
        (a, cc)
    }

    pub fn apply_polygon(&self, poly: &GeodesicPolygon) -> Result<GeodesicPolygon> {
        let n = poly.vertex_count();
        let mut angles = Vec::with_capacity(n);
        let mut table = Vec::with_capacity(n);
        for t in 1..=n {
            let phi = poly.angle(t);
            let (a, c) = self.curvature_coefficients(phi, poly.orientation(t));
            angles.push(self.apply_angle(phi));
            table.push(poly.radii(t).iter().map(|r| arccot(a * cot(*r) + c)).collect());
        }
        GeodesicPolygon::new(poly.g(), angles, table)
    }
}

/// Vertex pairs made antipodal by [`conformal_normalize`].
pub fn antipodal_targets(g: usize) -> Result<[(usize, usize); 2]> {
    match g {
        3 => Ok([(1, 4), (2, 5)]),
        4 => Ok([(1, 5), (2, 6)]),
        6 => Ok([(1, 7), (2, 8)]),
        _ => Err(Error::UnsupportedG(g)),
    }
}

fn antipodal_residual(poly: &GeodesicPolygon, m: &CircleMobius, targets: &[(usize, usize); 2]) -> [f64; 2] {
    targets.map(|(s, t)| wrap_pi(m.apply_angle(poly.angle(t)) - m.apply_angle(poly.angle(s)) - PI))
}

const NEWTON_ITERATIONS: usize = 100;
const NEWTON_TOL: f64 = 1e-12;

/// A map making the two target vertex pairs antipodal (`p⁵ = −p¹`,
/// `p⁶ = −p²` for `g = 4`; `p⁷, p⁸` for `g = 6`), followed by the rotation
/// that puts `p¹` back at angle `0`.
///
/// The boost `(b₁, b₂)` is found by Newton's method from the identity with a
/// finite-difference Jacobian and step halving.
pub fn conformal_normalize(poly: &GeodesicPolygon) -> Result<(CircleMobius, GeodesicPolygon)> {
    check_polygon_g(poly.g())?;
    let targets = antipodal_targets(poly.g())?;
    let residual = |b: [f64; 2]| antipodal_residual(poly, &CircleMobius::boost(b[0], b[1]), &targets);
    let size = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let mut b = [0.0, 0.0];
    let mut r = residual(b);
    let mut iterations = 0;
    while size(r) > NEWTON_TOL {
        if iterations == NEWTON_ITERATIONS {
            return Err(Error::NormalizationFailed { iterations, residual: size(r) });
        }
        iterations += 1;
        let h = 1e-7;
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let mut bp = b;
            let mut bm = b;
            bp[k] += h;
            bm[k] -= h;
            let (rp, rm) = (residual(bp), residual(bm));
            for i in 0..2 {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let step = solve2(jac, [-r[0], -r[1]])
            .ok_or(Error::NormalizationFailed { iterations, residual: size(r) })?;
        let mut t = 1.0;
        loop {
            let trial = [b[0] + t * step[0], b[1] + t * step[1]];
            let rt = residual(trial);
            if size(rt) < size(r) {
                b = trial;
                r = rt;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NormalizationFailed { iterations, residual: size(r) });
            }
        }
    }
    let boost = CircleMobius::boost(b[0], b[1]);
    let anchor = boost.apply_angle(poly.angle(1));
    let map = CircleMobius::rotation(-anchor).compose(&boost);
    let image = map.apply_polygon(poly)?;
    let check = antipodal_residual(&image, &CircleMobius::identity(), &targets);
    if size(check) > 1e-8 {
        return Err(Error::NormalizationFailed { iterations, residual: size(check) });
    }
    Ok((map, image))
}

/// Outcome of reducing the CMC equations to a linear system in `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometryReduction {
    pub x: f64,
    pub y: f64,
    /// Coefficients of `(x, y)` in the two equations; lower triangular in the
    /// gauge where the first focal point sits at `(0, 1)`.
    pub matrix: [[f64; 2]; 2],
    /// `Ĥ − K·λ̂`, negative on valid input.
    pub lambda_certificate: f64,
    /// `(v̂ − û)(Ĥ − K·τ̂)` for `g = 4`, `l̂(Ĥ − K·τ̂)` for `g = 6`; positive on
    /// valid input.
    pub tau_certificate: f64,
}

/// For a parallel polygon rotated so that the focal point of `λ` at `p¹` is
/// `(0, 1)`, writes `H^s = H^t` for the pairs `(1,2), (1,3)` (`g = 4`) or
/// `(1,2), (4,5)` (`g = 6`) after a conformal map with bottom row
/// `(x, y, α̌)` and solves for `(x, y)`.
///
/// Here `p̂¹ = (û, v̂)`, `p̂⁴ = (k̂, l̂)`, `K = Σ m_i` and `λ̂`, `τ̂` are the
/// largest and smallest principal curvatures.
pub fn isometry_reduction(poly: &GeodesicPolygon, m1: u32, m2: u32) -> Result<IsometryReduction> {
    let g = poly.g();
    let pairs = match g {
        4 => [(1, 2), (1, 3)],
        6 => [(1, 2), (4, 5)],
        _ => return Err(Error::UnsupportedG(g)),
    };
    if !is_parallel(poly) {
        return Err(Error::InvalidPolygon("isometry reduction needs a parallel polygon"));
    }
    if m1 == 0 || m2 == 0 || (g == 6 && m1 != m2) {
        return Err(Error::InvalidMultiplicities { g, m1, m2 });
    }
    let theta1 = poly.radii(1)[0];
    let rotation = CircleMobius::rotation(FRAC_PI_2 - theta1 - poly.angle(1));
    let hat = rotation.apply_polygon(poly)?;
    let m: Vec<f64> = (0..g).map(|i| if i % 2 == 0 { m1 as f64 } else { m2 as f64 }).collect();
    let k: f64 = m.iter().sum();
    let h = |t: usize| hat.mean_curvature(t, &m);
    let mut matrix = [[0.0; 2]; 2];
    let mut rhs = [0.0; 2];
    for (row, (s, t)) in pairs.iter().enumerate() {
        let (ps, pt) = (hat.position(*s), hat.position(*t));
        let (ns, nt) = (hat.normal(*s), hat.normal(*t));
        for c in 0..2 {
            matrix[row][c] = ps[c] * h(*s) - pt[c] * h(*t) + (ns[c] - nt[c]) * k;
        }
        rhs[row] = h(*t) - h(*s);
    }
    let lam = hat.curvatures(1)[0];
    let tau = hat.curvatures(1)[g - 1];
    let hh = h(1);
    let lambda_certificate = hh - k * lam;
    let tau_certificate = if g == 4 {
        let [u, v] = hat.position(1);
        (v - u) * (hh - k * tau)
    } else {
        hat.position(4)[1] * (hh - k * tau)
    };
    if !(lambda_certificate < 0.0) {
        return Err(Error::CertificateFailed { name: "lambda", value: lambda_certificate });
    }
    if !(tau_certificate > 0.0) {
        return Err(Error::CertificateFailed { name: "tau", value: tau_certificate });
    }
    let [x, y] = solve2(matrix, rhs).ok_or(Error::CertificateFailed { name: "determinant", value: 0.0 })?;
    Ok(IsometryReduction { x, y, matrix, lambda_certificate, tau_certificate })
}

#[cfg(test)]
mod tests {
    use super::super::{build_parallel_polygon, link_check, polygon_lie_curvature, CurvaturePattern};
    use super::*;

    #[test]
    fn boost_is_in_group() {
        let b = CircleMobius::boost(0.4, -1.1);
        assert!(CircleMobius::new(b.matrix().clone()).is_ok());
        assert!((b.alpha_check() - libm::sqrt(1.0 + b.x() * b.x() + b.y() * b.y())).abs() < 1e-12);
    }

    #[test]
    fn boosted_polygon_keeps_links_and_lie_curvature() {
        let p = build_parallel_polygon(4, 0.1).unwrap();
        let q = CircleMobius::boost(0.3, 0.2).apply_polygon(&p).unwrap();
        assert!(link_check(&q).max_residual < 1e-9);
        let phi = polygon_lie_curvature(&q, 3, CurvaturePattern::OCTAGON_ADJACENT).unwrap();
        assert!((phi + 1.0).abs() < 1e-10);
    }

    #[test]
    fn normalizing_a_boosted_polygon() {
        let p = build_parallel_polygon(4, 0.1).unwrap();
        let (map, _) = conformal_normalize(&p).unwrap();
        assert!(map.x().abs() < 1e-12 && map.y().abs() < 1e-12);
        let q = CircleMobius::boost(-0.5, 0.35).apply_polygon(&p).unwrap();
        let (_, r) = conformal_normalize(&q).unwrap();
        assert!(r.angle(1).abs() < 1e-12);
        assert!(is_parallel(&r));
    }

    #[test]
    fn reduction_certificates_at_minimal_dodecagon() {
        let p = build_parallel_polygon(6, 0.0).unwrap();
        let red = isometry_reduction(&p, 1, 1).unwrap();
        let s3 = libm::sqrt(3.0);
        assert!((red.lambda_certificate + 6.0 * (2.0 + s3)).abs() < 1e-10);
        let l = libm::sin(11.0 * PI / 12.0);
        assert!((red.tau_certificate - l * 6.0 * (2.0 + s3)).abs() < 1e-10);
        assert!(red.x.abs() < 1e-10 && red.y.abs() < 1e-10);
        assert!(red.matrix[0][1].abs() < 1e-12);
    }

    #[test]
    fn reduction_rejects_nonparallel() {
        let gaps = super::super::AngleGaps::from_free(&[0.7, 0.8, 0.9], &[0.8, 0.7, 0.9]).unwrap();
        let p = super::super::angle_table(&gaps, 0.2, 0.2).unwrap();
        assert!(isometry_reduction(&p, 1, 1).is_err());
    }
}
