//! Oriented hyperspheres of `S^n` as points of the Lie quadric.
//!
//! An oriented sphere with center `p ∈ S^n` and signed radius `ρ ∈ (0, π)`
//! corresponds to the null line through `(p, cos ρ, sin ρ) ∈ R^{n+1,2}`.
//! Point spheres have last coordinate zero, great spheres have the
//! second-to-last coordinate zero. A point `p` with unit normal `n` lifts to the
//! line spanned by the point sphere `k1 = (p, 1, 0)` and the great sphere
//! `k2 = (n, 0, 1)`; curvature spheres are the points `v·k1 + u·k2` on that
//! line with principal curvature `λ = v/u`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dense::Matrix;
use crate::indefinite::{LieTransform, Signature, SignedVector};
use crate::math::{dot, norm};
use crate::{Error, Result};

/// Relative tolerance for a representative to count as null.
pub const NULL_TOL: f64 = 1e-9;
/// Tolerance for `|c|` or `|s|` to be treated as zero when classifying.
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphereKind {
    /// Radius in `(0, π)`.
    Sphere { radius: f64, orientation: Orientation },
    /// Radius zero.
    Point,
    /// Radius `π/2`.
    Great(Orientation),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrientedSphere {
    center: Vec<f64>,
    kind: SphereKind,
}

impl OrientedSphere {
    /// `center` must be a unit vector; a `Sphere` radius must lie in `(0, π)`.
    pub fn new(center: Vec<f64>, kind: SphereKind) -> Result<Self> {
        if center.is_empty() || (norm(&center) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSphere("center is not a unit vector"));
        }
        if let SphereKind::Sphere { radius, .. } = kind {
            if !(radius > 0.0 && radius < PI) {
                return Err(Error::InvalidSphere("radius outside (0, π)"));
            }
        }
        Ok(OrientedSphere { center, kind })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn kind(&self) -> SphereKind {
        self.kind
    }
}

/// A point of the Lie quadric, stored through a null representative.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricPoint {
    rep: SignedVector,
}

impl QuadricPoint {
    /// Accepts `rep` if `|⟨rep, rep⟩| ≤ 1e-9·‖rep‖²` and `rep ≠ 0`.
    pub fn new(rep: SignedVector) -> Result<Self> {
        let n = rep.euclidean_norm();
        let n2 = n * n;
        if n2 == 0.0 {
            return Err(Error::NotOnQuadric { residual: 0.0 });
        }
        let q = rep.inner(&rep)?;
        if q.abs() > NULL_TOL * n2 {
            return Err(Error::NotOnQuadric { residual: q.abs() / n2 });
        }
        Ok(QuadricPoint { rep })
    }

    pub fn representative(&self) -> &SignedVector {
        &self.rep
    }

    /// Equality as points of projective space: the representatives are
    /// parallel up to `tol` (sine of the angle between them).
    pub fn projectively_equal(&self, other: &QuadricPoint, tol: f64) -> bool {
        let (a, b) = (self.rep.coords(), other.rep.coords());
        if a.len() != b.len() {
            return false;
        }
        let (na, nb) = (norm(a), norm(b));
        let s = if dot(a, b) < 0.0 { -1.0 } else { 1.0 };
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x / na - s * y / nb) * (x / na - s * y / nb)).sum();
        libm::sqrt(d) <= tol
    }

    pub fn transform(&self, l: &LieTransform) -> Result<QuadricPoint> {
        QuadricPoint::new(l.apply(&self.rep)?)
    }
}

pub fn sphere_to_quadric(sphere: &OrientedSphere) -> QuadricPoint {
    let (c, s) = match sphere.kind {
        SphereKind::Sphere { radius, orientation } => {
            (libm::cos(radius), orientation.sign() * libm::sin(radius))
        }
        SphereKind::Point => (1.0, 0.0),
        SphereKind::Great(o) => (0.0, o.sign()),
    };
    let mut coords = sphere.center.clone();
    coords.push(c);
    coords.push(s);
    let sig = Signature::lie(sphere.center.len() - 1);
    QuadricPoint { rep: SignedVector::new(sig, coords).expect("length n+3") }
}

/// Inverse of [`sphere_to_quadric`] up to projective scaling.
pub fn classify(point: &QuadricPoint) -> Result<OrientedSphere> {
    let x = point.rep.coords();
    let k = x.len() - 2;
    let r = norm(&x[..k]);
    if r == 0.0 {
        return Err(Error::NotOnQuadric { residual: 0.0 });
    }
    let center: Vec<f64> = x[..k].iter().map(|v| v / r).collect();
    let (c, s) = (x[k] / r, x[k + 1] / r);
    let orientation = if s < 0.0 { Orientation::Negative } else { Orientation::Positive };
    let kind = if s.abs() <= CLASSIFY_TOL {
        SphereKind::Point
    } else if c.abs() <= CLASSIFY_TOL {
        SphereKind::Great(orientation)
    } else {
        SphereKind::Sphere { radius: libm::atan2(s.abs(), c), orientation }
    };
    OrientedSphere::new(center, kind)
}

/// Oriented contact: `|⟨a, b⟩| ≤ tol·‖a‖·‖b‖`.
pub fn in_contact(a: &QuadricPoint, b: &QuadricPoint, tol: f64) -> Result<bool> {
    let ip = a.rep.inner(&b.rep)?;
    Ok(ip.abs() <= tol * a.rep.euclidean_norm() * b.rep.euclidean_norm())
}

/// A principal curvature in homogeneous form `λ = v/u`; `u = 0` is `λ = ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveCurvature {
    pub v: f64,
    pub u: f64,
}

impl ProjectiveCurvature {
    pub fn new(v: f64, u: f64) -> Result<Self> {
        if v == 0.0 && u == 0.0 {
            return Err(Error::OutOfRange { name: "homogeneous curvature", value: 0.0 });
        }
        Ok(ProjectiveCurvature { v, u })
    }

    pub fn from_value(lambda: f64) -> Self {
        ProjectiveCurvature { v: lambda, u: 1.0 }
    }

    pub fn infinity() -> Self {
        ProjectiveCurvature { v: 1.0, u: 0.0 }
    }

    /// `λ = cot ρ` for the curvature-sphere radius `ρ`.
    pub fn from_radius(radius: f64) -> Self {
        ProjectiveCurvature { v: libm::cos(radius), u: libm::sin(radius) }
    }

    pub fn value(&self) -> Option<f64> {
        if self.u == 0.0 {
            None
        } else {
            Some(self.v / self.u)
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.u == 0.0
    }

    /// Radius in `[0, π)` with `cot(radius) = λ`; `λ = ∞` gives 0.
    pub fn radius(&self) -> f64 {
        let (v, u) = if self.u < 0.0 { (-self.v, -self.u) } else { (self.v, self.u) };
        let r = libm::atan2(u, v);
        if !(0.0..PI).contains(&r) {
            0.0
        } else {
            r
        }
    }

    /// `λ_self − λ_other` without the denominators `u_self·u_other`, which
    /// cancel in every cross ratio.
    pub fn bracket(&self, other: &ProjectiveCurvature) -> f64 {
        self.v * other.u - other.v * self.u
    }

    /// Sine of the angle between the homogeneous vectors.
    pub fn distance(&self, other: &ProjectiveCurvature) -> f64 {
        let n = libm::hypot(self.v, self.u) * libm::hypot(other.v, other.u);
        (self.bracket(other) / n).abs()
    }
}

/// Coefficients of the induced action `λ ↦ (aλ + c)/(bλ + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MoebiusCoefficients {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        let det = a * d - b * c;
        if scale == 0.0 || det.abs() <= 1e-14 * scale * scale {
            return Err(Error::SingularMoebius);
        }
        Ok(MoebiusCoefficients { a, b, c, d })
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, lambda: ProjectiveCurvature) -> ProjectiveCurvature {
        ProjectiveCurvature {
            v: self.a * lambda.v + self.c * lambda.u,
            u: self.b * lambda.v + self.d * lambda.u,
        }
    }
}

pub fn moebius_curvature(a: f64, b: f64, c: f64, d: f64, lambda: ProjectiveCurvature) -> Result<ProjectiveCurvature> {
    Ok(MoebiusCoefficients::new(a, b, c, d)?.apply(lambda))
}

/// The Legendre lift of a point `p ∈ S^n` with unit normal `n ⊥ p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactElement {
    point: Vec<f64>,
    normal: Vec<f64>,
    k1: SignedVector,
    k2: SignedVector,
}

impl ContactElement {
    pub fn new(point: Vec<f64>, normal: Vec<f64>) -> Result<Self> {
        legendre_lift(&point, &normal)
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    /// The point sphere `(p, 1, 0)`.
    pub fn point_sphere(&self) -> &SignedVector {
        &self.k1
    }

    /// The great sphere `(n, 0, 1)`.
    pub fn great_sphere(&self) -> &SignedVector {
        &self.k2
    }

    pub fn signature(&self) -> Signature {
        self.k1.signature()
    }

    /// The sphere `v·k1 + u·k2` on the contact line.
    pub fn curvature_sphere(&self, lambda: ProjectiveCurvature) -> QuadricPoint {
        let rep = self.k1.combine(lambda.v, &self.k2, lambda.u).expect("same signature");
        QuadricPoint { rep }
    }

    /// The coefficients `(a, b, c, d)` read off the last two coordinates of
    /// `L·k1 = (q, a, b)` and `L·k2 = (m, c, d)`.
    pub fn induced_moebius(&self, l: &LieTransform) -> Result<MoebiusCoefficients> {
        let lk1 = l.apply(&self.k1)?;
        let lk2 = l.apply(&self.k2)?;
        let k = lk1.coords().len() - 2;
        MoebiusCoefficients::new(lk1.coords()[k], lk1.coords()[k + 1], lk2.coords()[k], lk2.coords()[k + 1])
    }

    /// The image contact element in standard form: the point sphere and the
    /// great sphere on the transformed line.
    pub fn transform(&self, l: &LieTransform) -> Result<ContactElement> {
        let mc = self.induced_moebius(l)?;
        let lk1 = l.apply(&self.k1)?;
        let lk2 = l.apply(&self.k2)?;
        let det = mc.determinant();
        // d·Lk1 − b·Lk2 ends in (det, 0); −c·Lk1 + a·Lk2 ends in (0, det)
        let p = lk1.combine(mc.d / det, &lk2, -mc.b / det)?;
        let n = lk1.combine(-mc.c / det, &lk2, mc.a / det)?;
        let k = p.coords().len() - 2;
        legendre_lift(&p.coords()[..k], &n.coords()[..k])
    }
}

/// `k1 = (p, 1, 0)`, `k2 = (n, 0, 1)`; requires `|p| = |n| = 1` and `p·n = 0`
/// to `1e-10`.
pub fn legendre_lift(p: &[f64], n: &[f64]) -> Result<ContactElement> {
    if p.len() != n.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: n.len() });
    }
    if p.len() < 2 {
        return Err(Error::DegenerateContactElement("ambient dimension below 2"));
    }
    if (norm(p) - 1.0).abs() > 1e-10 || (norm(n) - 1.0).abs() > 1e-10 {
        return Err(Error::DegenerateContactElement("point and normal must be unit vectors"));
    }
    if dot(p, n).abs() > 1e-10 {
        return Err(Error::DegenerateContactElement("normal is not orthogonal to the point"));
    }
    let sig = Signature::lie(p.len() - 1);
    let mut k1 = p.to_vec();
    k1.extend_from_slice(&[1.0, 0.0]);
    let mut k2 = n.to_vec();
    k2.extend_from_slice(&[0.0, 1.0]);
    Ok(ContactElement {
        point: p.to_vec(),
        normal: n.to_vec(),
        k1: SignedVector::new(sig, k1)?,
        k2: SignedVector::new(sig, k2)?,
    })
}

/// The parallel transformation by `θ`: identity on the positive block and the
/// rotation `[[cos θ, −sin θ], [sin θ, cos θ]]` on the two negative
/// directions. It induces `cot ξ ↦ cot(ξ + θ)` on principal curvatures.
pub fn parallel_transform(theta: f64, signature: Signature) -> Result<LieTransform> {
    if signature.minus() != 2 {
        return Err(Error::InvalidSignature { plus: signature.plus(), minus: signature.minus() });
    }
    let k = signature.plus();
    let mut m = Matrix::identity(signature.dim());
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    m[(k, k)] = c;
    m[(k, k + 1)] = -s;
    m[(k + 1, k)] = s;
    m[(k + 1, k + 1)] = c;
    LieTransform::new(signature, m)
}

/// `[w1, w2; w3, w4] = (w1 − w3)(w2 − w4) / ((w1 − w4)(w2 − w3))`.
pub fn cross_ratio(w1: Complex64, w2: Complex64, w3: Complex64, w4: Complex64) -> Result<Complex64> {
    let den = (w1 - w4) * (w2 - w3);
    if den.norm() == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok((w1 - w3) * (w2 - w4) / den)
}

/// How four principal curvatures are paired in a Lie curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `(λ1 − λ3)(λ2 − λ4) / ((λ1 − λ4)(λ2 − λ3))`.
    Diagonal,
    /// `(λ1 − λ2)(λ3 − λ4) / ((λ1 − λ4)(λ3 − λ2))`.
    Adjacent,
}

impl Pairing {
    /// Reorders four entries so that the plain cross ratio
    /// `[x1, x2; x3, x4]` realizes this pairing.
    pub fn arrange<T: Copy>(self, x: [T; 4]) -> [T; 4] {
        match self {
            Pairing::Diagonal => x,
            Pairing::Adjacent => [x[0], x[2], x[1], x[3]],
        }
    }
}

/// The Lie curvature of four principal curvatures, computed homogeneously so
/// that an infinite curvature is handled exactly.
pub fn lie_curvature(lambdas: [ProjectiveCurvature; 4], pairing: Pairing) -> Result<f64> {
    let [x1, x2, x3, x4] = pairing.arrange(lambdas);
    let den = x1.bracket(&x4) * x2.bracket(&x3);
    if den == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(x1.bracket(&x3) * x2.bracket(&x4) / den)
}

/// [`lie_curvature`] for finite values.
pub fn lie_curvature_of_values(lambdas: [f64; 4], pairing: Pairing) -> Result<f64> {
    lie_curvature(lambdas.map(ProjectiveCurvature::from_value), pairing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::random_lie_transform;
    use core::f64::consts::{FRAC_PI_2, SQRT_2};

    fn e(k: usize, n: usize) -> Vec<f64> {
        let mut v = alloc::vec![0.0; n];
        v[k] = 1.0;
        v
    }

    #[test]
    fn sphere_roundtrip() {
        let s = OrientedSphere::new(
            e(0, 3),
            SphereKind::Sphere { radius: 0.7, orientation: Orientation::Negative },
        )
        .unwrap();
        let q = sphere_to_quadric(&s);
        assert!(q.representative().inner(q.representative()).unwrap().abs() < 1e-15);
        match classify(&q).unwrap().kind() {
            SphereKind::Sphere { radius, orientation } => {
                assert!((radius - 0.7).abs() < 1e-12);
                assert_eq!(orientation, Orientation::Negative);
            }
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn special_spheres_classify() {
        let sig = Signature::lie(2);
        let p = QuadricPoint::new(SignedVector::new(sig, alloc::vec![0., 0., 1., 1., 0.]).unwrap()).unwrap();
        assert_eq!(classify(&p).unwrap().kind(), SphereKind::Point);
        let g = QuadricPoint::new(SignedVector::new(sig, alloc::vec![0., 0., 1., 0., -1.]).unwrap()).unwrap();
        assert_eq!(classify(&g).unwrap().kind(), SphereKind::Great(Orientation::Negative));
        let scaled = QuadricPoint::new(SignedVector::new(sig, alloc::vec![0., 0., 3., 0., -3.]).unwrap()).unwrap();
        assert!(g.projectively_equal(&scaled, 1e-12));
    }

    #[test]
    fn non_null_vector_is_rejected() {
        let sig = Signature::lie(2);
        let v = SignedVector::new(sig, alloc::vec![1., 0., 0., 0.5, 0.]).unwrap();
        assert!(matches!(QuadricPoint::new(v), Err(Error::NotOnQuadric { .. })));
    }

    #[test]
    fn lift_rejects_non_orthogonal_normal() {
        let n = [libm::sqrt(0.5), libm::sqrt(0.5), 0.0];
        assert!(legendre_lift(&e(0, 3), &n).is_err());
    }

    #[test]
    fn curvature_sphere_touches_both_frame_spheres() {
        let ce = legendre_lift(&e(0, 4), &e(1, 4)).unwrap();
        for lam in [ProjectiveCurvature::from_value(-2.5), ProjectiveCurvature::infinity()] {
            let k = ce.curvature_sphere(lam);
            let p = QuadricPoint::new(ce.point_sphere().clone()).unwrap();
            assert!(in_contact(&k, &p, 1e-12).unwrap());
        }
    }

    #[test]
    fn parallel_transform_induces_rotation_of_radii() {
        let sig = Signature::lie(3);
        let ce = legendre_lift(&e(0, 4), &e(3, 4)).unwrap();
        let l = parallel_transform(0.3, sig).unwrap();
        let mc = ce.induced_moebius(&l).unwrap();
        let (c, s) = (libm::cos(0.3), libm::sin(0.3));
        assert!((mc.a - c).abs() < 1e-15 && (mc.b - s).abs() < 1e-15);
        assert!((mc.c + s).abs() < 1e-15 && (mc.d - c).abs() < 1e-15);
        let img = mc.apply(ProjectiveCurvature::from_radius(0.9));
        assert!((img.value().unwrap() - crate::math::cot(1.2)).abs() < 1e-12);
    }

    #[test]
    fn transformed_curvature_spheres_are_image_curvature_spheres() {
        let sig = Signature::lie(3);
        let ce = legendre_lift(&e(1, 4), &e(2, 4)).unwrap();
        let l = random_lie_transform(sig, 5, 1.0).unwrap();
        let mc = ce.induced_moebius(&l).unwrap();
        let image = ce.transform(&l).unwrap();
        for lam in [-1.3, 0.0, 0.4, 7.0] {
            let lam = ProjectiveCurvature::from_value(lam);
            let direct = ce.curvature_sphere(lam).transform(&l).unwrap();
            let via_moebius = image.curvature_sphere(mc.apply(lam));
            assert!(direct.projectively_equal(&via_moebius, 1e-10));
        }
    }

    #[test]
    fn moebius_singular_rejected() {
        assert_eq!(moebius_curvature(1., 2., 2., 4., ProjectiveCurvature::from_value(1.)), Err(Error::SingularMoebius));
    }

    #[test]
    fn cross_ratio_of_square() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let r = cross_ratio(one, i, -one, -i).unwrap();
        assert!((r - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(cross_ratio(one, one, i, one), Err(Error::CoincidentPoints));
    }

    #[test]
    fn minimal_octagon_lie_curvatures() {
        let l = [SQRT_2 + 1.0, SQRT_2 - 1.0, 1.0 - SQRT_2, -1.0 - SQRT_2];
        assert!((lie_curvature_of_values(l, Pairing::Diagonal).unwrap() - 2.0).abs() < 1e-14);
        assert!((lie_curvature_of_values(l, Pairing::Adjacent).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn infinite_curvature_is_exact() {
        let lams = [
            ProjectiveCurvature::infinity(),
            ProjectiveCurvature::from_value(1.0),
            ProjectiveCurvature::from_value(0.0),
            ProjectiveCurvature::from_value(-1.0),
        ];
        // (∞ − 0)(1 + 1) / ((∞ + 1)(1 − 0)) = 2
        assert!((lie_curvature(lams, Pairing::Diagonal).unwrap() - 2.0).abs() < 1e-15);
        assert!(ProjectiveCurvature::infinity().radius() == 0.0);
        assert!((ProjectiveCurvature::from_value(0.0).radius() - FRAC_PI_2).abs() < 1e-15);
    }
}
