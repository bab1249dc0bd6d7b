//! Linear systems in the derivatives `d_ji = e_j(λ_i)` of principal
//! curvatures along principal directions, evaluated at a point with given
//! principal curvatures.
//!
//! Labels `(j, i)` are 1-based with `j ≠ i` (`d_jj = 0` for Dupin
//! hypersurfaces). Each constraint contributes one row per direction `j`:
//!
//! * constant mean curvature: `Σ_i m_i d_ji = 0`;
//! * constant `Σ m_i λ_i²`: `Σ_i m_i λ_i d_ji = 0`;
//! * a constant Lie curvature `(λa − λb)(λc − λd)/((λa − λd)(λc − λb))`: its
//!   logarithmic derivative
//!   `(d_a − d_b)/(λa − λb) + (d_c − d_d)/(λc − λd) − (d_a − d_d)/(λa − λd) − (d_c − d_b)/(λc − λb) = 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{kernel, Matrix};
use crate::lie_sphere::Pairing;
use crate::polygon::{Constraint, CurvaturePattern};
use crate::{Error, Result};

pub type Label = (usize, usize);

/// Relative singular-value threshold for kernels.
pub const KERNEL_TOL: f64 = 1e-9;

/// Lie curvature rows for `g = 4`: the one octagon curvature.
pub fn octagon_lie_patterns() -> Vec<CurvaturePattern> {
    vec![CurvaturePattern::OCTAGON_ADJACENT]
}

/// `Φ_h` for `h = 3, 4, 6`.
pub fn dodecagon_lie_patterns() -> Vec<CurvaturePattern> {
    [3, 4, 6].iter().map(|h| CurvaturePattern::dodecagon(*h)).collect()
}

/// The further Lie curvatures used to clear the rows `j = 3, 4, 6, 5` of the
/// dodecagon system: `(ν−ρ)(λ_h−λ)/((ν−λ)(λ_h−ρ))` for `h = 2, 5, 6`,
/// `(ρ−ν)(λ_h−λ)/((ρ−λ)(λ_h−ν))` for `h = 2, 5, 6`,
/// `(τ−ν)(λ_h−λ)/((τ−λ)(λ_h−ν))` for `h = 2, 4, 5` and
/// `(σ−μ)(λ_h−λ)/((σ−λ)(λ_h−μ))` for `h = 3, 4, 6`.
pub fn dodecagon_auxiliary_patterns() -> Vec<CurvaturePattern> {
    let mut out = Vec::new();
    let fam: [([usize; 2], [usize; 3]); 4] = [([3, 4], [2, 5, 6]), ([4, 3], [2, 5, 6]), ([6, 3], [2, 4, 5]), ([5, 2], [3, 4, 6])];
    for ([a, b], hs) in fam {
        for h in hs {
            out.push(CurvaturePattern { indices: [a, b, h, 1], pairing: Pairing::Adjacent });
        }
    }
    out
}

/// Labels `(j, 1)` for every `j` and `(1, 2)`: `λ` critical and `μ` critical
/// along the `λ`-leaf.
pub fn critical_pinning(g: usize) -> Vec<Label> {
    let mut v: Vec<Label> = (2..=g).map(|j| (j, 1)).collect();
    v.push((1, 2));
    v
}

/// Labels `(j, 1)` and `(1, i)` for every `j`, `i`.
pub fn full_first_pinning(g: usize) -> Vec<Label> {
    let mut v: Vec<Label> = (2..=g).map(|j| (j, 1)).collect();
    v.extend((2..=g).map(|i| (1, i)));
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeSystem {
    g: usize,
    labels: Vec<Label>,
    rows: Matrix,
    row_kinds: Vec<Constraint>,
    row_names: Vec<String>,
    pcs: Vec<f64>,
    multiplicities: Vec<f64>,
    assumed_zero: Vec<Label>,
}

impl DerivativeSystem {
    pub fn g(&self) -> usize {
        self.g
    }

    /// Unknowns in column order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn row_kinds(&self) -> &[Constraint] {
        &self.row_kinds
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn pcs(&self) -> &[f64] {
        &self.pcs
    }

    pub fn multiplicities(&self) -> &[f64] {
        &self.multiplicities
    }

    pub fn assumed_zero(&self) -> &[Label] {
        &self.assumed_zero
    }

    pub fn unknowns(&self) -> usize {
        self.labels.len()
    }

    /// Unknowns left once the mean-curvature rows are used to eliminate one
    /// unknown each (their rank is subtracted).
    pub fn effective_unknowns(&self) -> usize {
        let cmc: Vec<Vec<f64>> = (0..self.rows.rows())
            .filter(|r| self.row_kinds[*r] == Constraint::Cmc)
            .map(|r| self.rows.row(r).to_vec())
            .collect();
        if cmc.is_empty() {
            return self.unknowns();
        }
        let m = Matrix::from_rows(&cmc).expect("equal widths");
        self.unknowns() - kernel(&m, KERNEL_TOL).rank()
    }

    /// Coefficient of `d_label` in row `r`, `None` if the label is pinned.
    pub fn coefficient(&self, r: usize, label: Label) -> Option<f64> {
        let c = self.labels.iter().position(|l| *l == label)?;
        Some(self.rows[(r, c)])
    }
}

fn check_pcs(pcs: &[f64]) -> Result<()> {
    if pcs.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::RepeatedCurvatures);
    }
    Ok(())
}

/// Rows of the chosen kinds over every unpinned `d_ji`. For `g = 4` the
/// multiplicities alternate `m1, m2`; for `g = 6` the common multiplicity
/// cancels and rows use `1`. Lie rows use [`octagon_lie_patterns`], or
/// [`dodecagon_lie_patterns`] together with
/// [`dodecagon_auxiliary_patterns`]; other pattern sets go through
/// [`build_system_with_patterns`].
pub fn build_system(g: usize, pcs: &[f64], m1: u32, m2: u32, constraints: &[Constraint], assumed_zero: &[Label]) -> Result<DerivativeSystem> {
    let patterns = if constraints.contains(&Constraint::Clc) {
        match g {
            4 => octagon_lie_patterns(),
            6 => {
                let mut p = dodecagon_lie_patterns();
                p.extend(dodecagon_auxiliary_patterns());
                p
            }
            _ => return Err(Error::UnsupportedG(g)),
        }
    } else {
        Vec::new()
    };
    build_system_with_patterns(g, pcs, m1, m2, constraints, &patterns, assumed_zero)
}

pub fn build_system_with_patterns(
    g: usize,
    pcs: &[f64],
    m1: u32,
    m2: u32,
    constraints: &[Constraint],
    patterns: &[CurvaturePattern],
    assumed_zero: &[Label],
) -> Result<DerivativeSystem> {
    if pcs.len() != g {
        return Err(Error::DimensionMismatch { expected: g, found: pcs.len() });
    }
    check_pcs(pcs)?;
    for p in patterns {
        if p.indices.iter().any(|i| *i == 0 || *i > g) {
            return Err(Error::DimensionMismatch { expected: g, found: *p.indices.iter().max().unwrap_or(&0) });
        }
    }
    let multiplicities: Vec<f64> = if g == 6 {
        vec![1.0; g]
    } else {
        (0..g).map(|i| if i % 2 == 0 { m1 as f64 } else { m2 as f64 }).collect()
    };
    let mut pinned: Vec<Label> = assumed_zero.to_vec();
    pinned.sort();
    pinned.dedup();
    let labels: Vec<Label> =
        (1..=g).flat_map(|j| (1..=g).map(move |i| (j, i))).filter(|(j, i)| j != i && !pinned.contains(&(*j, *i))).collect();
    let col = |j: usize, i: usize| labels.iter().position(|l| *l == (j, i));
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut kinds = Vec::new();
    let mut names = Vec::new();
    let mut emit = |coef: &[f64], j: usize, kind: Constraint, name: String| {
        let mut row = vec![0.0; labels.len()];
        for i in 1..=g {
            if i != j {
                if let Some(c) = col(j, i) {
                    row[c] += coef[i - 1];
                }
            }
        }
        rows.push(row);
        kinds.push(kind);
        names.push(name);
    };
    let mut kinds_sorted = constraints.to_vec();
    kinds_sorted.sort();
    kinds_sorted.dedup();
    for j in 1..=g {
        for kind in &kinds_sorted {
            match kind {
                Constraint::Cmc => emit(&multiplicities, j, Constraint::Cmc, format!("cmc j={j}")),
                Constraint::Csc => {
                    let c: Vec<f64> = multiplicities.iter().zip(pcs).map(|(m, l)| m * l).collect();
                    emit(&c, j, Constraint::Csc, format!("csc j={j}"));
                }
                Constraint::Clc => {
                    for p in patterns {
                        let c = log_derivative_row(pcs, *p);
                        let [a, b, cc, d] = p.indices;
                        emit(&c, j, Constraint::Clc, format!("lie ({a},{b},{cc},{d}) j={j}"));
                    }
                }
            }
        }
    }
    let width = labels.len();
    let matrix = if rows.is_empty() {
        Matrix::zeros(0, width)
    } else {
        Matrix::from_rows(&rows)?
    };
    Ok(DerivativeSystem {
        g,
        labels,
        rows: matrix,
        row_kinds: kinds,
        row_names: names,
        pcs: pcs.to_vec(),
        multiplicities,
        assumed_zero: pinned,
    })
}

/// Coefficients of `d_j1 … d_jg` in the logarithmic derivative of the Lie
/// curvature with the given pattern (adjacent pairing of its indices).
pub fn log_derivative_row(pcs: &[f64], pattern: CurvaturePattern) -> Vec<f64> {
    let [a, b, c, d] = match pattern.pairing {
        Pairing::Adjacent => pattern.indices,
        // (λa−λc)(λb−λd)/((λa−λd)(λb−λc)) is the adjacent form of (a, c, b, d)
        Pairing::Diagonal => {
            let [a, b, c, d] = pattern.indices;
            [a, c, b, d]
        }
    };
    let mut row = vec![0.0; pcs.len()];
    let l = |i: usize| pcs[i - 1];
    let mut add = |x: usize, y: usize, sign: f64| {
        let den = l(x) - l(y);
        row[x - 1] += sign / den;
        row[y - 1] -= sign / den;
    };
    add(a, b, 1.0);
    add(c, d, 1.0);
    add(a, d, -1.0);
    add(c, b, -1.0);
    row
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub unknowns: usize,
    pub rank: usize,
    pub dimension: usize,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Null vectors as `(label, value)` lists.
    pub basis: Vec<Vec<(Label, f64)>>,
    /// Singular values within three orders of magnitude of the threshold.
    pub near_threshold: Vec<f64>,
}

/// SVD rank with threshold `1e−9 · σ_max`.
pub fn kernel_analysis(sys: &DerivativeSystem) -> KernelReport {
    let k = kernel(&sys.rows, KERNEL_TOL);
    let basis = k
        .basis
        .iter()
        .map(|v| sys.labels.iter().copied().zip(v.iter().copied()).collect())
        .collect();
    KernelReport {
        unknowns: sys.unknowns(),
        rank: sys.unknowns() - k.dimension(),
        dimension: k.dimension(),
        singular_values: k.singular_values,
        threshold: k.threshold,
        basis,
        near_threshold: k.near_threshold,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn name(self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Zero => "zero",
        }
    }
}

/// Margin a certificate must clear, or the tolerance for a `Zero` claim.
pub const CERTIFICATE_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SignCertificate {
    pub name: String,
    pub value: f64,
    pub claimed: Sign,
}

impl SignCertificate {
    fn new(name: &str, value: f64, claimed: Sign) -> Self {
        SignCertificate { name: String::from(name), value, claimed }
    }

    pub fn holds(&self) -> bool {
        match self.claimed {
            Sign::Positive => self.value > CERTIFICATE_MARGIN,
            Sign::Negative => self.value < -CERTIFICATE_MARGIN,
            Sign::Zero => self.value.abs() <= CERTIFICATE_MARGIN,
        }
    }
}

/// `(u_h, v_h, w_h)` with `u_h d_j2 + v_h d_j5 + w_h d_jh` the logarithmic
/// derivative of `Φ_h` once `d_j1 = 0`.
pub fn dodecagon_uvw(pcs: &[f64], h: usize) -> [f64; 3] {
    let (l, mu, s, lh) = (pcs[0], pcs[1], pcs[4], pcs[h - 1]);
    [
        (l - lh) / ((lh - mu) * (l - mu)),
        (lh - l) / ((l - s) * (lh - s)),
        (s - mu) / ((lh - s) * (lh - mu)),
    ]
}

/// `Σ_h (λ_h − τ)(λ − λ_h)(σ − λ_h)` over `λ_h ∈ {μ, ν, ρ}`, with the three
/// summands. Each summand is negative for decreasing curvatures.
pub fn g6_d5_obstruction_terms(pcs: &[f64]) -> Result<(f64, [f64; 3])> {
    if pcs.len() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, found: pcs.len() });
    }
    check_pcs(pcs)?;
    let (l, s, tau) = (pcs[0], pcs[4], pcs[5]);
    let terms = [pcs[1], pcs[2], pcs[3]].map(|h| (h - tau) * (l - h) * (s - h));
    Ok((terms.iter().sum(), terms))
}

pub fn g6_d5_obstruction(pcs: &[f64]) -> Result<f64> {
    g6_d5_obstruction_terms(pcs).map(|(total, _)| total)
}

/// `1 + Σ_h (λ − λ_h)(λ_r − λ_h)/((λ − λ_p)(λ_r − λ_p))`: the coefficient of
/// `d_jp` after the Lie rows for `j` express every `d_jh` through it.
fn row_sum(pcs: &[f64], r: usize, p: usize, hs: [usize; 3]) -> f64 {
    let l = |i: usize| pcs[i - 1];
    1.0 + hs.iter().map(|&h| (l(1) - l(h)) * (l(r) - l(h)) / ((l(1) - l(p)) * (l(r) - l(p)))).sum::<f64>()
}

/// `(λ − λ_p)(λ_r − λ_h)/((λ − λ_h)(λ_r − λ_p))`, a Lie curvature.
fn ratio(pcs: &[f64], r: usize, p: usize, h: usize) -> f64 {
    let l = |i: usize| pcs[i - 1];
    (l(1) - l(p)) * (l(r) - l(h)) / ((l(1) - l(h)) * (l(r) - l(p)))
}

/// The sign claims that make the derivative systems force `d_ji = 0`,
/// evaluated at `pcs`. Empty for `g` other than 4 and 6.
pub fn sign_certificates(g: usize, pcs: &[f64]) -> Result<Vec<SignCertificate>> {
    if pcs.len() != g {
        return Err(Error::DimensionMismatch { expected: g, found: pcs.len() });
    }
    check_pcs(pcs)?;
    let mut out = Vec::new();
    match g {
        4 => {
            let (l, mu, nu, tau) = (pcs[0], pcs[1], pcs[2], pcs[3]);
            out.push(SignCertificate::new("lambda_4 - lambda_3", tau - nu, Sign::Negative));
            out.push(SignCertificate::new(
                "(tau-mu)/(nu-mu) * (nu-lambda)/(lambda-tau)",
                (tau - mu) / (nu - mu) * (nu - l) / (l - tau),
                Sign::Negative,
            ));
            out.push(SignCertificate::new(
                "(lambda-nu)/(lambda-mu) * (tau-mu)/(nu-tau)",
                (l - nu) / (l - mu) * (tau - mu) / (nu - tau),
                Sign::Negative,
            ));
            let q = (nu - mu) / (nu - tau);
            out.push(SignCertificate::new("1 - ((nu-mu)/(nu-tau))^2", 1.0 - q * q, Sign::Positive));
        }
        6 => {
            let mut total = 1.0;
            for h in [3, 4, 6] {
                let [_, v, w] = dodecagon_uvw(pcs, h);
                let (vs, ws) = if h == 6 { (Sign::Positive, Sign::Negative) } else { (Sign::Negative, Sign::Positive) };
                out.push(SignCertificate::new(&format!("v_{h}"), v, vs));
                out.push(SignCertificate::new(&format!("w_{h}"), w, ws));
                total -= v / w;
            }
            out.push(SignCertificate::new("1 - v_3/w_3 - v_4/w_4 - v_6/w_6", total, Sign::Positive));
            for (h, s) in [(2, Sign::Negative), (5, Sign::Positive), (6, Sign::Positive)] {
                out.push(SignCertificate::new(&format!("ratio j=3 h={h}"), ratio(pcs, 3, 4, h), s));
            }
            out.push(SignCertificate::new("row j=3 coefficient", row_sum(pcs, 3, 4, [2, 5, 6]), Sign::Positive));
            for (h, s) in [(2, Sign::Positive), (5, Sign::Negative), (6, Sign::Negative)] {
                out.push(SignCertificate::new(&format!("ratio j=4 h={h}"), ratio(pcs, 4, 3, h), s));
            }
            out.push(SignCertificate::new("row j=4 coefficient", row_sum(pcs, 4, 3, [2, 5, 6]), Sign::Negative));
            out.push(SignCertificate::new("row j=6 coefficient", row_sum(pcs, 6, 3, [2, 4, 5]), Sign::Positive));
            let (total, terms) = g6_d5_obstruction_terms(pcs)?;
            for (k, t) in terms.iter().enumerate() {
                out.push(SignCertificate::new(&format!("d5 obstruction term {}", k + 1), *t, Sign::Negative));
            }
            out.push(SignCertificate::new("d5 obstruction", total, Sign::Negative));
        }
        _ => {}
    }
    Ok(out)
}

/// `μ + τ` and `μτ` in terms of `λ, ν` and `H` under `Φ = −1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureQuadratic {
    pub a: f64,
    pub b: f64,
}

impl CurvatureQuadratic {
    pub fn new(lambda: f64, nu: f64, h: f64, m1: u32, m2: u32) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::InvalidMultiplicities { g: 4, m1, m2 });
        }
        let a = (h - m1 as f64 * (lambda + nu)) / m2 as f64;
        let b = 0.5 * (a * (lambda + nu) - 2.0 * lambda * nu);
        Ok(CurvatureQuadratic { a, b })
    }

    pub fn discriminant(&self) -> f64 {
        self.a * self.a - 4.0 * self.b
    }

    /// Roots of `t² − A t + B`, larger first.
    pub fn roots(&self) -> Result<(f64, f64)> {
        let disc = self.discriminant();
        if !(disc > 0.0) {
            return Err(Error::InconsistentData("non-positive discriminant"));
        }
        let q = 0.5 * (self.a + self.a.signum() * libm::sqrt(disc));
        let (r1, r2) = if q == 0.0 { (0.5 * libm::sqrt(disc), -0.5 * libm::sqrt(disc)) } else { (q, self.b / q) };
        Ok(if r1 >= r2 { (r1, r2) } else { (r2, r1) })
    }
}

/// `(μ, τ)` from `λ > ν`, `H` and the multiplicities of an octagon with
/// `Φ = −1`; checks `λ > μ > ν > τ`.
pub fn recover_pair(lambda: f64, nu: f64, h: f64, m1: u32, m2: u32) -> Result<(f64, f64)> {
    if !(lambda > nu) {
        return Err(Error::InconsistentData("expected lambda > nu"));
    }
    let (mu, tau) = CurvatureQuadratic::new(lambda, nu, h, m1, m2)?.roots()?;
    if !(lambda > mu && mu > nu && nu > tau) {
        return Err(Error::InconsistentData("recovered curvatures do not interlace"));
    }
    Ok((mu, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isoparametric::IsoparametricFamily;

    fn pcs(g: usize, theta: f64) -> Vec<f64> {
        IsoparametricFamily::new(g, 1, 1, theta).unwrap().principal_curvatures()
    }

    #[test]
    fn octagon_cmc_row_for_j2() {
        let sys = build_system(4, &pcs(4, 0.0), 2, 3, &[Constraint::Cmc, Constraint::Csc], &critical_pinning(4)).unwrap();
        let r = sys.row_names().iter().position(|n| n == "cmc j=2").unwrap();
        assert_eq!(sys.coefficient(r, (2, 3)), Some(2.0));
        assert_eq!(sys.coefficient(r, (2, 4)), Some(3.0));
        assert_eq!(sys.coefficient(r, (2, 1)), None);
    }

    #[test]
    fn empty_system() {
        let sys = build_system(4, &pcs(4, 0.0), 1, 1, &[], &[]).unwrap();
        assert_eq!(sys.rows().rows(), 0);
        assert_eq!(kernel_analysis(&sys).dimension, 12);
    }

    #[test]
    fn dodecagon_counts() {
        let sys = build_system(6, &pcs(6, 0.0), 1, 1, &[Constraint::Cmc, Constraint::Clc], &critical_pinning(6)).unwrap();
        assert_eq!(sys.unknowns(), 24);
        assert_eq!(sys.effective_unknowns(), 18);
        assert_eq!(sys.rows().rows(), 6 * 16);
    }

    #[test]
    fn repeated_curvatures_rejected() {
        assert!(matches!(
            build_system(4, &[1.0, 1.0, 0.0, -1.0], 1, 1, &[Constraint::Cmc], &[]),
            Err(Error::RepeatedCurvatures)
        ));
    }

    #[test]
    fn log_row_matches_finite_difference() {
        let l = [3.0, 1.2, 0.1, -0.7, -1.5, -4.0];
        let p = CurvaturePattern::dodecagon(4);
        let row = log_derivative_row(&l, p);
        let f = |v: &[f64]| {
            let [a, b, c, d] = p.indices.map(|i| v[i - 1]);
            libm::log(((a - b) * (c - d) / ((a - d) * (c - b))).abs())
        };
        for k in 0..6 {
            let mut lp = l;
            let mut lm = l;
            lp[k] += 1e-6;
            lm[k] -= 1e-6;
            let fd = (f(&lp) - f(&lm)) / 2e-6;
            assert!((fd - row[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn recover_pair_examples() {
        let s2 = libm::sqrt(2.0);
        let (mu, tau) = recover_pair(s2 + 1.0, -(s2 - 1.0), 0.0, 1, 1).unwrap();
        assert!((mu - (s2 - 1.0)).abs() < 1e-12 && (tau + s2 + 1.0).abs() < 1e-12);
        assert!(recover_pair(1.0, -0.9, 0.0, 1, 1).is_err());
    }
}
