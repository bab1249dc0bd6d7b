//! Geodesic polygons: the `2g` points where a Dupin hypersurface meets one of
//! its normal geodesics.
//!
//! The normal geodesic through `p¹` is drawn as the unit circle with `p¹` at
//! angle `φ₁` and the unit normal at odd vertices pointing counter-clockwise.
//! At an even vertex the normal points clockwise. At vertex `t` the curvature
//! sphere of radius `θ^t_i` meets the circle again at angle
//! `φ_t ± 2θ^t_i` (sign by parity), which is another vertex: for odd `t` it is
//! `p^{t+2i−1}` (indices mod `2g`). These incidences are the *link relations*;
//! along the link the principal curvature is the same, so
//! `θ^t_i = θ^{t+2i−1}_i`.
//!
//! Vertex labels and curvature indices are 1-based throughout this module, as
//! in the tables they reproduce.

mod angles;
mod conformal;
pub mod oracle;
mod search;

pub use angles::*;
pub use conformal::*;
pub use search::*;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::lie_sphere::{cross_ratio, lie_curvature_of_values, Pairing};
use crate::math::{cot, wrap_pi, wrap_tau};
use crate::{Error, Result};

/// Tolerance for identities that hold by construction.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance for link relations and the parallel test.
pub const LINK_TOL: f64 = 1e-9;
/// Tolerance for quantities produced by iterative solvers.
pub const SOLVER_TOL: f64 = 1e-6;

pub(crate) fn check_polygon_g(g: usize) -> Result<()> {
    match g {
        3 | 4 | 6 => Ok(()),
        _ => Err(Error::UnsupportedG(g)),
    }
}

/// Consecutive differences of curvature-sphere radii along the odd and even
/// rows of the angle table; each sequence has `g` entries summing to `π`.
///
/// For `g = 4` the odd gaps are `(α, β, γ, δ)` and the even gaps
/// `(a, b, c, d)`; the last entry of each closes the sum.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleGaps {
    odd: Vec<f64>,
    even: Vec<f64>,
}

impl AngleGaps {
    /// From the `g − 1` free gaps of each sequence; the closers are computed.
    pub fn from_free(odd_free: &[f64], even_free: &[f64]) -> Result<Self> {
        if odd_free.len() != even_free.len() {
            return Err(Error::DimensionMismatch { expected: odd_free.len(), found: even_free.len() });
        }
        let close = |free: &[f64]| {
            let mut v = free.to_vec();
            v.push(PI - free.iter().sum::<f64>());
            v
        };
        AngleGaps::new(close(odd_free), close(even_free))
    }

    /// Full sequences; each must sum to `π` within `1e-12` with every entry
    /// in `(0, π)`.
    pub fn new(odd: Vec<f64>, even: Vec<f64>) -> Result<Self> {
        if odd.len() != even.len() {
            return Err(Error::DimensionMismatch { expected: odd.len(), found: even.len() });
        }
        check_polygon_g(odd.len())?;
        for seq in [&odd, &even] {
            if (seq.iter().sum::<f64>() - PI).abs() > 1e-12 {
                return Err(Error::InvalidGaps("gaps must sum to π"));
            }
            if seq.iter().any(|x| !(*x > 0.0 && *x < PI)) {
                return Err(Error::InvalidGaps("every gap must lie in (0, π)"));
            }
        }
        Ok(AngleGaps { odd, even })
    }

    /// All gaps `π/g`.
    pub fn uniform(g: usize) -> Result<Self> {
        check_polygon_g(g)?;
        let v = vec![PI / g as f64; g];
        Ok(AngleGaps { odd: v.clone(), even: v })
    }

    pub fn g(&self) -> usize {
        self.odd.len()
    }

    pub fn odd(&self) -> &[f64] {
        &self.odd
    }

    pub fn even(&self) -> &[f64] {
        &self.even
    }

    /// `w_k = e^{2i·gap_k}` for the odd gaps.
    pub fn odd_phases(&self) -> Vec<Complex64> {
        self.odd.iter().map(|x| Complex64::from_polar(1.0, 2.0 * x)).collect()
    }
}

/// One link relation: curvature `index` at the odd vertex equals the same
/// curvature at the even vertex, and the curvature sphere passes through both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub odd_vertex: usize,
    pub even_vertex: usize,
    pub index: usize,
}

/// All `g²` link relations.
pub fn links(g: usize) -> Vec<Link> {
    let n = 2 * g;
    let mut out = Vec::with_capacity(g * g);
    for t in (1..=n).step_by(2) {
        for i in 1..=g {
            let s = (t + 2 * i - 2) % n + 1;
            out.push(Link { odd_vertex: t, even_vertex: s, index: i });
        }
    }
    out
}

/// The vertex whose position closes the curvature sphere `index` of `vertex`.
pub fn link_partner(g: usize, vertex: usize, index: usize) -> usize {
    let n = 2 * g;
    if vertex % 2 == 1 {
        (vertex + 2 * index - 2) % n + 1
    } else {
        // even t links back to t − 2i + 1
        (vertex + 2 * n - 2 * index) % n + 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPolygon {
    g: usize,
    vertex_angles: Vec<f64>,
    radius_table: Vec<Vec<f64>>,
}

impl GeodesicPolygon {
    /// Validates: `2g` angles in cyclic order with positive gaps, and each
    /// table row strictly increasing inside `(0, π)`.
    pub fn new(g: usize, vertex_angles: Vec<f64>, radius_table: Vec<Vec<f64>>) -> Result<Self> {
        check_polygon_g(g)?;
        let n = 2 * g;
        if vertex_angles.len() != n || radius_table.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: vertex_angles.len().min(radius_table.len()) });
        }
        let angles: Vec<f64> = vertex_angles.iter().map(|a| wrap_tau(*a)).collect();
        let total: f64 = (0..n).map(|t| wrap_tau(angles[(t + 1) % n] - angles[t])).sum();
        let min_gap = (0..n).map(|t| wrap_tau(angles[(t + 1) % n] - angles[t])).fold(f64::INFINITY, f64::min);
        if (total - TAU).abs() > 1e-9 || !(min_gap > 0.0) {
            return Err(Error::InvalidPolygon("vertices are not in cyclic order"));
        }
        for row in &radius_table {
            if row.len() != g {
                return Err(Error::DimensionMismatch { expected: g, found: row.len() });
            }
            let increasing = row.windows(2).all(|w| w[0] < w[1]);
            if !increasing || !(row[0] > 0.0) || !(row[g - 1] < PI) {
                return Err(Error::InvalidPolygon("radii must increase strictly inside (0, π)"));
            }
        }
        Ok(GeodesicPolygon { g, vertex_angles: angles, radius_table })
    }

    /// A copy with `θ^t_i` replaced, validated again.
    pub fn with_radius(&self, t: usize, i: usize, radius: f64) -> Result<GeodesicPolygon> {
        let mut table = self.radius_table.clone();
        let slot = table.get_mut(t.wrapping_sub(1)).and_then(|row| row.get_mut(i.wrapping_sub(1)));
        match slot {
            Some(x) => *x = radius,
            None => return Err(Error::OutOfRange { name: "table index", value: (t * 10 + i) as f64 }),
        }
        GeodesicPolygon::new(self.g, self.vertex_angles.clone(), table)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.g
    }

    pub fn vertex_angles(&self) -> &[f64] {
        &self.vertex_angles
    }

    pub fn radius_table(&self) -> &[Vec<f64>] {
        &self.radius_table
    }

    /// Angle `φ_t` of vertex `t ∈ 1..=2g`.
    pub fn angle(&self, t: usize) -> f64 {
        self.vertex_angles[t - 1]
    }

    /// Radii `θ^t_1 < … < θ^t_g` at vertex `t`.
    pub fn radii(&self, t: usize) -> &[f64] {
        &self.radius_table[t - 1]
    }

    /// Principal curvatures `cot θ^t_i` at vertex `t`, decreasing.
    pub fn curvatures(&self, t: usize) -> Vec<f64> {
        self.radii(t).iter().map(|r| cot(*r)).collect()
    }

    /// `+1` at odd vertices (normal counter-clockwise), `−1` at even ones.
    pub fn orientation(&self, t: usize) -> f64 {
        if t % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn position(&self, t: usize) -> [f64; 2] {
        let a = self.angle(t);
        [libm::cos(a), libm::sin(a)]
    }

    pub fn normal(&self, t: usize) -> [f64; 2] {
        let a = self.angle(t);
        let s = self.orientation(t);
        [-s * libm::sin(a), s * libm::cos(a)]
    }

    /// Angle where the `i`-th curvature sphere at `t` meets the circle again.
    pub fn antipodal_angle(&self, t: usize, i: usize) -> f64 {
        wrap_tau(self.angle(t) + 2.0 * self.orientation(t) * self.radii(t)[i - 1])
    }

    /// `Σ_i m_i cot θ^t_i`.
    pub fn mean_curvature(&self, t: usize, multiplicities: &[f64]) -> f64 {
        self.curvatures(t).iter().zip(multiplicities).map(|(l, m)| l * m).sum()
    }

    /// `Σ_i m_i cot² θ^t_i`.
    pub fn second_moment(&self, t: usize, multiplicities: &[f64]) -> f64 {
        self.curvatures(t).iter().zip(multiplicities).map(|(l, m)| l * l * m).sum()
    }

    /// Gaps of row `t`, closed to `π`.
    pub fn row_gaps(&self, t: usize) -> Vec<f64> {
        let r = self.radii(t);
        let mut gaps: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.push(PI + r[0] - r[self.g - 1]);
        gaps
    }
}

/// The polygon of the isoparametric member `M_θ`: vertex gaps alternate `2θ₁`
/// and `2(π/g − θ₁)`, and every vertex carries the radii `θ₁ + (i−1)π/g`.
pub fn build_parallel_polygon(g: usize, theta: f64) -> Result<GeodesicPolygon> {
    check_polygon_g(g)?;
    let b = PI / (2.0 * g as f64);
    if !(theta > -b && theta < b) {
        return Err(Error::OutOfRange { name: "theta", value: theta });
    }
    let theta1 = b + theta;
    let step = PI / g as f64;
    let mut angles = Vec::with_capacity(2 * g);
    for k in 0..g {
        angles.push(2.0 * k as f64 * step);
        angles.push(2.0 * theta1 + 2.0 * k as f64 * step);
    }
    let row: Vec<f64> = (0..g).map(|i| theta1 + i as f64 * step).collect();
    GeodesicPolygon::new(g, angles, vec![row; 2 * g])
}

fn rotate_left(v: &[f64], k: usize) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| v[(i + k) % n]).collect()
}

fn rotate_right(v: &[f64], k: usize) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| v[(i + n - k % n) % n]).collect()
}

fn accumulate(base: f64, gaps: &[f64]) -> Vec<f64> {
    let mut row = Vec::with_capacity(gaps.len());
    let mut r = base;
    for gap in gaps {
        row.push(r);
        r += gap;
    }
    row
}

/// The full angle table from the gap sequences and the base radii of `p¹` and
/// `p²`.
///
/// Row `p^{2k+1}` uses the odd gaps rotated left by `k`, row `p^{2k+2}` the
/// even gaps rotated right by `k`. Vertex positions follow from rows 1 and 2
/// (`φ₁ = 0`, `φ_{2i} = 2θ¹_i`, `φ_{3−2i} = φ₂ − 2θ²_i`) and every other base
/// radius from `θ^{2k+1}_1 = θ^{2k+2}_1 = (φ_{2k+2} − φ_{2k+1})/2`. For `g = 4`
/// this gives `θ³₁ = θ¹₁ + α − d`, `θ⁵₁ = θ¹₁ + a + b − γ − δ`,
/// `θ⁷₁ = θ¹₁ + a − δ`.
pub fn angle_table(gaps: &AngleGaps, theta11: f64, theta21: f64) -> Result<GeodesicPolygon> {
    for (name, v) in [("theta11", theta11), ("theta21", theta21)] {
        if !(v > 0.0 && v < PI) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    let (phi, table) = raw_table(gaps.odd(), gaps.even(), theta11, theta21);
    GeodesicPolygon::new(gaps.g(), phi, table)
}

/// Vertex angles and radius rows without any validation.
pub(crate) fn raw_table(odd: &[f64], even: &[f64], theta11: f64, theta21: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let g = odd.len();
    let n = 2 * g;
    let row1 = accumulate(theta11, odd);
    let row2 = accumulate(theta21, even);
    let mut phi = vec![0.0; n];
    for i in 1..=g {
        phi[2 * i - 1] = wrap_tau(2.0 * row1[i - 1]);
    }
    for i in 2..=g {
        let s = link_partner(g, 2, i);
        phi[s - 1] = wrap_tau(phi[1] - 2.0 * row2[i - 1]);
    }
    let mut table = vec![Vec::new(); n];
    table[0] = row1;
    table[1] = row2;
    for k in 1..g {
        let t = 2 * k + 1;
        let base = wrap_tau(phi[t] - phi[t - 1]) / 2.0;
        table[t - 1] = accumulate(base, &rotate_left(odd, k));
        table[t] = accumulate(base, &rotate_right(even, k));
    }
    (phi, table)
}

/// Residuals of one link relation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkResidual {
    pub link: Link,
    /// `|cot θ^t_i − cot θ^s_i|`.
    pub curvature: f64,
    /// Angular distance between the sphere's second intersection and the
    /// partner vertex, worst of both directions.
    pub position: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkReport {
    pub holds: bool,
    pub max_residual: f64,
    pub residuals: Vec<LinkResidual>,
}

pub fn link_check(poly: &GeodesicPolygon) -> LinkReport {
    let mut residuals = Vec::new();
    let mut max_residual: f64 = 0.0;
    for link in links(poly.g) {
        let (t, s, i) = (link.odd_vertex, link.even_vertex, link.index);
        let curvature = (cot(poly.radii(t)[i - 1]) - cot(poly.radii(s)[i - 1])).abs();
        let forward = wrap_pi(poly.antipodal_angle(t, i) - poly.angle(s)).abs();
        let backward = wrap_pi(poly.antipodal_angle(s, i) - poly.angle(t)).abs();
        let position = forward.max(backward);
        max_residual = max_residual.max(curvature).max(position);
        residuals.push(LinkResidual { link, curvature, position });
    }
    LinkReport { holds: max_residual <= LINK_TOL, max_residual, residuals }
}

/// Every row equals row 1 within `1e-9`.
pub fn is_parallel(poly: &GeodesicPolygon) -> bool {
    is_parallel_within(poly, LINK_TOL)
}

pub fn is_parallel_within(poly: &GeodesicPolygon, tol: f64) -> bool {
    parallel_deviation(poly) <= tol
}

/// Largest `|θ^t_i − θ¹_i|` over the table.
pub fn parallel_deviation(poly: &GeodesicPolygon) -> f64 {
    let first = poly.radii(1);
    poly.radius_table
        .iter()
        .flat_map(|row| row.iter().zip(first).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Four curvature indices (1-based) and how they are paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurvaturePattern {
    pub indices: [usize; 4],
    pub pairing: Pairing,
}

impl CurvaturePattern {
    /// `(λ1 − λ3)(λ2 − λ4)/((λ1 − λ4)(λ2 − λ3))` on curvatures 1..4.
    pub const OCTAGON_DIAGONAL: CurvaturePattern =
        CurvaturePattern { indices: [1, 2, 3, 4], pairing: Pairing::Diagonal };
    /// `(λ − μ)(ν − τ)/((λ − τ)(ν − μ))`, equal to −1 on every isoparametric
    /// octagon.
    pub const OCTAGON_ADJACENT: CurvaturePattern =
        CurvaturePattern { indices: [1, 2, 3, 4], pairing: Pairing::Adjacent };

    /// `Φ_h = (λ − μ)(λ_h − σ)/((λ − σ)(λ_h − μ))` for `g = 6`.
    pub const fn dodecagon(h: usize) -> CurvaturePattern {
        CurvaturePattern { indices: [1, 2, h, 5], pairing: Pairing::Adjacent }
    }

    fn check(&self, g: usize) -> Result<()> {
        let ix = self.indices;
        let distinct = (0..4).all(|a| (a + 1..4).all(|b| ix[a] != ix[b]));
        if !distinct || ix.iter().any(|&i| i == 0 || i > g) {
            return Err(Error::CoincidentPoints);
        }
        Ok(())
    }
}

/// Value of the dodecagon Lie curvatures `Φ_3, Φ_4, Φ_6` on the isoparametric
/// family.
pub const DODECAGON_LIE_VALUES: [(usize, f64); 3] = [(3, -1.0), (4, -1.0 / 3.0), (6, 1.0 / 3.0)];

/// The Lie curvature at vertex `t` as a cross ratio of the vertices where the
/// selected curvature spheres meet the circle again.
pub fn polygon_lie_curvature(poly: &GeodesicPolygon, t: usize, pattern: CurvaturePattern) -> Result<f64> {
    pattern.check(poly.g)?;
    let z = pattern.indices.map(|i| {
        let s = link_partner(poly.g, t, i);
        Complex64::from_polar(1.0, poly.angle(s))
    });
    let [a, b, c, d] = pattern.pairing.arrange(z);
    Ok(cross_ratio(a, b, c, d)?.re)
}

/// The same Lie curvature from the principal curvatures `cot θ^t_i`.
pub fn vertex_lie_curvature(poly: &GeodesicPolygon, t: usize, pattern: CurvaturePattern) -> Result<f64> {
    pattern.check(poly.g)?;
    let l = poly.curvatures(t);
    lie_curvature_of_values(pattern.indices.map(|i| l[i - 1]), pattern.pairing)
}
