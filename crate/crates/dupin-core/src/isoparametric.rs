//! Isoparametric families `M_θ` in `S^n` with `g ∈ {1, 2, 3, 4, 6}` distinct
//! principal curvatures.
//!
//! The principal curvatures of `M_θ` are `λ_i = cot θ_i` with
//! `θ_i = π/(2g) + θ + (i−1)π/g`, `θ ∈ (−π/(2g), π/(2g))`. Multiplicities
//! alternate `m1, m2, m1, …`; for odd `g` (and by convention `g = 6`) they are
//! all equal.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::lie_sphere::ProjectiveCurvature;
use crate::math::{arccot, cot, dot, norm};
use crate::{Error, Result};

/// Relative agreement required between the closed-form and direct evaluations.
pub const FORMULA_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsoparametricFamily {
    g: usize,
    m1: u32,
    m2: u32,
    theta: f64,
}

/// `n`, `H`, `S = ‖A‖²` and scalar curvature `R` of one member of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyInvariants {
    pub dimension: usize,
    pub mean_curvature: f64,
    pub second_moment: f64,
    pub scalar_curvature: f64,
    /// The closed form in `θ₁` for `g ∈ {3, 4, 6}`.
    pub specialized_scalar_curvature: Option<f64>,
}

fn check_g(g: usize) -> Result<()> {
    match g {
        1 | 2 | 3 | 4 | 6 => Ok(()),
        _ => Err(Error::UnsupportedG(g)),
    }
}

fn check_multiplicities(g: usize, m1: u32, m2: u32) -> Result<()> {
    check_g(g)?;
    let ok = m1 >= 1
        && m2 >= 1
        && match g {
            1 | 3 | 6 => m1 == m2,
            _ => true,
        };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidMultiplicities { g, m1, m2 })
    }
}

fn theta_bound(g: usize) -> f64 {
    PI / (2.0 * g as f64)
}

impl IsoparametricFamily {
    pub fn new(g: usize, m1: u32, m2: u32, theta: f64) -> Result<Self> {
        check_multiplicities(g, m1, m2)?;
        let b = theta_bound(g);
        if !(theta > -b && theta < b) {
            return Err(Error::OutOfRange { name: "theta", value: theta });
        }
        Ok(IsoparametricFamily { g, m1, m2, theta })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn m1(&self) -> u32 {
        self.m1
    }

    pub fn m2(&self) -> u32 {
        self.m2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `θ₁ = π/(2g) + θ ∈ (0, π/g)`.
    pub fn theta1(&self) -> f64 {
        theta_bound(self.g) + self.theta
    }

    /// Curvature-sphere radii `θ_i`, increasing in `(0, π)`.
    pub fn radii(&self) -> Vec<f64> {
        let step = PI / self.g as f64;
        (0..self.g).map(|i| self.theta1() + i as f64 * step).collect()
    }

    /// `λ_1 > λ_2 > … > λ_g`.
    pub fn principal_curvatures(&self) -> Vec<f64> {
        self.radii().into_iter().map(cot).collect()
    }

    /// Multiplicity of `λ_i` for `i = 1..=g`.
    pub fn multiplicity(&self, i: usize) -> u32 {
        if i % 2 == 1 {
            self.m1
        } else {
            self.m2
        }
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        (1..=self.g).map(|i| self.multiplicity(i)).collect()
    }

    /// `n` with `n − 1 = g(m1 + m2)/2`.
    pub fn dimension(&self) -> usize {
        1 + self.g * (self.m1 + self.m2) as usize / 2
    }

    /// `Σ m_i λ_i`.
    pub fn mean_curvature_direct(&self) -> f64 {
        let m: Vec<f64> = self.multiplicities().iter().map(|&m| m as f64).collect();
        dot(&m, &self.principal_curvatures())
    }

    /// `H = (g/2)(m1·t − m2/t)` with `t = cot(g·θ₁/2)`; for `g = 2` the direct
    /// sum is used.
    pub fn mean_curvature(&self) -> f64 {
        if self.g == 2 {
            return self.mean_curvature_direct();
        }
        let h = closed_form_mean(self.g, self.m1, self.m2, self.theta1());
        debug_assert!(
            (h - self.mean_curvature_direct()).abs() <= FORMULA_TOL * h.abs().max(1.0),
            "mean curvature closed form disagrees with the direct sum"
        );
        h
    }

    /// `S = Σ m_i λ_i²`.
    pub fn second_moment(&self) -> f64 {
        self.principal_curvatures()
            .iter()
            .zip(self.multiplicities())
            .map(|(l, m)| m as f64 * l * l)
            .sum()
    }

    pub fn scalar_curvature(&self) -> FamilyInvariants {
        let n = self.dimension();
        let h = self.mean_curvature();
        let s = self.second_moment();
        let r = ((n - 1) * (n - 2)) as f64 + h * h - s;
        let specialized = specialized_scalar_curvature(self.g, self.m1, self.m2, self.theta1());
        if let Some(rs) = specialized {
            debug_assert!(
                (rs - r).abs() <= FORMULA_TOL * r.abs().max(1.0),
                "scalar curvature closed form disagrees with the general formula"
            );
        }
        FamilyInvariants {
            dimension: n,
            mean_curvature: h,
            second_moment: s,
            scalar_curvature: r,
            specialized_scalar_curvature: specialized,
        }
    }
}

fn closed_form_mean(g: usize, m1: u32, m2: u32, theta1: f64) -> f64 {
    let t = cot(g as f64 * theta1 / 2.0);
    g as f64 / 2.0 * (m1 as f64 * t - m2 as f64 / t)
}

/// The scalar curvature as a closed form in `θ₁`, for `g = 3, 4, 6`.
pub fn specialized_scalar_curvature(g: usize, m1: u32, m2: u32, theta1: f64) -> Option<f64> {
    let (m1, m2) = (m1 as f64, m2 as f64);
    match g {
        3 => {
            let c = cot(3.0 * theta1);
            Some(9.0 * m1 * (m1 - 1.0) * (1.0 + c * c))
        }
        4 => {
            let t = cot(2.0 * theta1);
            Some(4.0 * (m1 * (m1 - 1.0) * (1.0 + t * t) + m2 * (m2 - 1.0) * (1.0 + 1.0 / (t * t))))
        }
        6 => {
            let c = cot(6.0 * theta1);
            Some(36.0 * m1 * (m1 - 1.0) * (1.0 + c * c))
        }
        _ => None,
    }
}

/// The unique `θ` whose member has mean curvature `h`, by bisection to
/// `|Δθ| ≤ 1e-12`. The mean curvature is strictly decreasing in `θ` and maps
/// the parameter interval onto the real line.
pub fn theta_from_mean_curvature(g: usize, m1: u32, m2: u32, h: f64) -> Result<f64> {
    check_multiplicities(g, m1, m2)?;
    if !h.is_finite() {
        return Err(Error::OutOfRange { name: "mean curvature", value: h });
    }
    let b = theta_bound(g);
    let mean = |theta: f64| -> f64 {
        let theta1 = b + theta;
        if g == 2 {
            m1 as f64 * cot(theta1) - m2 as f64 * libm::tan(theta1)
        } else {
            closed_form_mean(g, m1, m2, theta1)
        }
    };
    // bracket by halving the distance to each end of the interval
    let mut lo = -b / 2.0;
    let mut gap = b / 2.0;
    while mean(lo) < h {
        gap /= 2.0;
        lo = -b + gap;
        if gap < f64::MIN_POSITIVE {
            return Err(Error::OutOfRange { name: "mean curvature", value: h });
        }
    }
    let mut hi = b / 2.0;
    let mut gap = b / 2.0;
    while mean(hi) > h {
        gap /= 2.0;
        hi = b - gap;
        if gap < f64::MIN_POSITIVE {
            return Err(Error::OutOfRange { name: "mean curvature", value: h });
        }
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean(mid) > h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The minimal member: `t² = m2/m1` with `t = cot(g·θ₁/2)`.
pub fn minimal_theta(g: usize, m1: u32, m2: u32) -> Result<f64> {
    check_multiplicities(g, m1, m2)?;
    let t = libm::sqrt(m2 as f64 / m1 as f64);
    let theta1 = 2.0 * arccot(t) / g as f64;
    Ok(theta1 - theta_bound(g))
}

/// Focal points `±(cos ρ·p + sin ρ·n)` for the curvature `λ = cot ρ`,
/// `ρ ∈ (0, π)`; an infinite curvature gives `±p`.
pub fn focal_points(p: &[f64], n: &[f64], lambda: ProjectiveCurvature) -> Result<(Vec<f64>, Vec<f64>)> {
    if p.len() != n.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: n.len() });
    }
    if (norm(p) - 1.0).abs() > 1e-10 || (norm(n) - 1.0).abs() > 1e-10 || dot(p, n).abs() > 1e-10 {
        return Err(Error::DegenerateContactElement("point and normal must be orthonormal"));
    }
    let rho = lambda.radius();
    let (c, s) = (libm::cos(rho), libm::sin(rho));
    let f: Vec<f64> = p.iter().zip(n).map(|(a, b)| c * a + s * b).collect();
    let g = f.iter().map(|v| -v).collect();
    Ok((f, g))
}

/// `L_p(x) = d(x, p)² = arccos(x·p)²` on the unit sphere.
pub fn distance_squared(x: &[f64], p: &[f64]) -> Result<f64> {
    if x.len() != p.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: x.len() });
    }
    let d = libm::acos(dot(x, p).clamp(-1.0, 1.0));
    Ok(d * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::SQRT_2;

    #[test]
    fn mean_curvature_is_strictly_decreasing() {
        for (g, m1, m2) in [(1, 2, 2), (2, 1, 3), (3, 1, 1), (4, 1, 2), (4, 3, 3), (6, 2, 2)] {
            let b = theta_bound(g);
            let h: Vec<f64> = (1..200)
                .map(|k| IsoparametricFamily::new(g, m1, m2, -b + 2.0 * b * k as f64 / 200.0).unwrap().mean_curvature())
                .collect();
            assert!(h.windows(2).all(|w| w[1] < w[0]), "g={g} m=({m1},{m2})");
        }
    }

    #[test]
    fn octagon_minimal_curvatures() {
        let f = IsoparametricFamily::new(4, 1, 1, 0.0).unwrap();
        let want = [SQRT_2 + 1.0, SQRT_2 - 1.0, 1.0 - SQRT_2, -1.0 - SQRT_2];
        for (a, b) in f.principal_curvatures().iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(f.mean_curvature().abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(IsoparametricFamily::new(5, 1, 1, 0.0), Err(Error::UnsupportedG(5)));
        assert!(IsoparametricFamily::new(3, 1, 2, 0.0).is_err());
        assert!(IsoparametricFamily::new(4, 1, 1, PI / 8.0).is_err());
    }

    #[test]
    fn minimal_theta_of_unequal_octagon() {
        let th = minimal_theta(4, 1, 4).unwrap();
        // 2θ₁ = arccot 2
        assert!((th - (arccot(2.0) / 2.0 - PI / 8.0)).abs() < 1e-15);
        let f = IsoparametricFamily::new(4, 1, 4, th).unwrap();
        assert!(f.mean_curvature().abs() < 1e-10);
    }

    #[test]
    fn hexagon_scalar_curvature_vanishes_for_unit_multiplicity() {
        for th in [-0.3, 0.0, 0.2] {
            let inv = IsoparametricFamily::new(3, 1, 1, th).unwrap().scalar_curvature();
            assert!(inv.scalar_curvature.abs() < 1e-9);
            assert_eq!(inv.specialized_scalar_curvature, Some(0.0));
        }
    }

    #[test]
    fn one_curvature_mean_is_m_cot() {
        let f = IsoparametricFamily::new(1, 3, 3, 0.4).unwrap();
        assert!((f.mean_curvature() - 3.0 * cot(f.theta1())).abs() < 1e-12);
    }

    #[test]
    fn focal_points_of_point_sphere_curvature() {
        let (f, g) = focal_points(&[1.0, 0.0], &[0.0, 1.0], ProjectiveCurvature::infinity()).unwrap();
        assert_eq!(f, alloc::vec![1.0, 0.0]);
        assert_eq!(g, alloc::vec![-1.0, -0.0]);
        let (f, _) = focal_points(&[1.0, 0.0], &[0.0, 1.0], ProjectiveCurvature::from_value(0.0)).unwrap();
        assert!(f[0].abs() < 1e-16 && (f[1] - 1.0).abs() < 1e-16);
    }

    #[test]
    fn distance_squared_clamps() {
        assert_eq!(distance_squared(&[1.0, 0.0], &[1.0 + 1e-16, 0.0]).unwrap(), 0.0);
        assert!((distance_squared(&[-1.0, 0.0], &[1.0, 0.0]).unwrap() - PI * PI).abs() < 1e-12);
    }
}
