//! Named verification suites. Every suite is deterministic in its seed.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use dupin_core::derivatives::{build_system, critical_pinning, kernel_analysis, sign_certificates, Sign};
use dupin_core::indefinite::{random_lie_transform, Signature};
use dupin_core::isoparametric::{minimal_theta, theta_from_mean_curvature, IsoparametricFamily};
use dupin_core::lie_sphere::{cross_ratio, legendre_lift, lie_curvature, lie_curvature_of_values, Pairing, ProjectiveCurvature};
use dupin_core::polygon::{
    angle_table, build_parallel_polygon, conformal_normalize, constraint_search, g4_residual, g6_case_analysis,
    g6_normalized_family, g4_normalized_family, isometry_reduction, link_check, polygon_lie_curvature, psi_values,
    solve_g4_normalized, solve_g6_normalized, vertex_lie_curvature, AngleGaps, CircleMobius, Constraint,
    CurvaturePattern, GeodesicPolygon, SearchConfig,
};
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::VerificationCase;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    LieInvariance,
    CrossRatioIdentity,
    IsoparametricFormulas,
    AngleSolvers,
    DjiKernels,
    SignCertificates,
    IsometryReduction,
    ConstraintSearch,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::LieInvariance,
        Suite::CrossRatioIdentity,
        Suite::IsoparametricFormulas,
        Suite::AngleSolvers,
        Suite::DjiKernels,
        Suite::SignCertificates,
        Suite::IsometryReduction,
        Suite::ConstraintSearch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LieInvariance => "lie_invariance",
            Suite::CrossRatioIdentity => "cross_ratio_identity",
            Suite::IsoparametricFormulas => "isoparametric_formulas",
            Suite::AngleSolvers => "angle_solvers",
            Suite::DjiKernels => "dji_kernels",
            Suite::SignCertificates => "sign_certificates",
            Suite::IsometryReduction => "isometry_reduction",
            Suite::ConstraintSearch => "constraint_search",
            Suite::All => "all",
        }
    }

    pub fn parse(name: &str) -> Result<Suite, CliError> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .copied()
            .find(|s| s.name() == name)
            .ok_or_else(|| CliError::UnknownSuite(name.to_string()))
    }
}

type Params = BTreeMap<String, String>;

macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = Params::new();
        $(m.insert($k.to_string(), $v.to_string());)*
        m
    }};
}

struct Runner {
    suite: &'static str,
    seed: u64,
    tol: Option<f64>,
    cases: Vec<VerificationCase>,
}

impl Runner {
    fn new(suite: Suite, seed: u64, tol: Option<f64>) -> Self {
        Runner { suite: suite.name(), seed, tol, cases: Vec::new() }
    }

    fn case<F>(&mut self, id: String, params: Params, tolerance: f64, f: F)
    where
        F: FnOnce() -> Result<f64, String>,
    {
        let start = Instant::now();
        let residual = f();
        let ms = start.elapsed().as_millis() as u64;
        let tol = self.tol.unwrap_or(tolerance);
        self.cases.push(VerificationCase::judge(self.suite, format!("{}/{id}", self.suite), params, residual, tol, ms, self.seed));
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn theta_grid(g: usize, count: usize) -> Vec<f64> {
    let b = PI / (2.0 * g as f64);
    (1..=count).map(|k| -b + 2.0 * b * k as f64 / (count + 1) as f64).collect()
}

fn multiplicities(g: usize) -> Vec<(u32, u32)> {
    match g {
        2 | 4 => vec![(1, 1), (1, 2), (2, 1), (2, 2), (3, 4), (4, 5), (1, 6), (5, 2), (7, 8), (1, 9)],
        _ => (1..=4).map(|m| (m, m)).collect(),
    }
}

fn polygon_patterns(g: usize) -> Vec<CurvaturePattern> {
    match g {
        4 => vec![CurvaturePattern::OCTAGON_ADJACENT, CurvaturePattern::OCTAGON_DIAGONAL],
        6 => [3, 4, 6].iter().map(|h| CurvaturePattern::dodecagon(*h)).collect(),
        _ => Vec::new(),
    }
}

/// Worst relative change of every polygon Lie curvature.
fn lie_change(a: &GeodesicPolygon, b: &GeodesicPolygon) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for t in 1..=a.vertex_count() {
        for p in polygon_patterns(a.g()) {
            let x = polygon_lie_curvature(a, t, p).map_err(err)?;
            let y = polygon_lie_curvature(b, t, p).map_err(err)?;
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    Ok(worst)
}

fn random_unit_pair(rng: &mut ChaCha8Rng, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut gauss = || {
        let (u1, u2) = (unit(rng).max(1e-300), unit(rng));
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    };
    let p: Vec<f64> = (0..dim).map(|_| gauss()).collect();
    let q: Vec<f64> = (0..dim).map(|_| gauss()).collect();
    let np = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let p: Vec<f64> = p.iter().map(|x| x / np).collect();
    let d: f64 = q.iter().zip(&p).map(|(a, b)| a * b).sum();
    let n: Vec<f64> = q.iter().zip(&p).map(|(a, b)| a - d * b).collect();
    let nn = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    (p, n.iter().map(|x| x / nn).collect())
}

fn lie_invariance(r: &mut Runner) {
    let mut rng = rng_for(r.seed, 1);
    for k in 0..200u64 {
        let n = 2 + (k % 4) as usize;
        let (p, nrm) = random_unit_pair(&mut rng, n + 1);
        let scale = 0.2 + 1.3 * unit(&mut rng);
        let mut radii: Vec<f64> = (0..4).map(|_| 0.05 + (PI - 0.1) * unit(&mut rng)).collect();
        radii.sort_by(f64::total_cmp);
        let tseed = r.seed.wrapping_mul(1_000_003).wrapping_add(k);
        r.case(format!("contact/{k:03}"), params!("n" => n, "scale" => format!("{scale:.4}")), 1e-8, || {
            let ce = legendre_lift(&p, &nrm).map_err(err)?;
            let l = random_lie_transform(Signature::lie(n), tseed, scale).map_err(err)?;
            let mc = ce.induced_moebius(&l).map_err(err)?;
            let before: [ProjectiveCurvature; 4] = [0, 1, 2, 3].map(|i| ProjectiveCurvature::from_radius(radii[i]));
            let after = before.map(|x| mc.apply(x));
            let mut worst = 0.0f64;
            for pairing in [Pairing::Diagonal, Pairing::Adjacent] {
                let a = lie_curvature(before, pairing).map_err(err)?;
                let b = lie_curvature(after, pairing).map_err(err)?;
                worst = worst.max((a - b).abs() / a.abs().max(1.0));
            }
            Ok(worst)
        });
    }
    for k in 0..100u64 {
        let g = if k % 2 == 0 { 4 } else { 6 };
        let theta = (unit(&mut rng) - 0.5) * PI / (2.0 * g as f64);
        let (b1, b2, psi) = (0.8 * (unit(&mut rng) - 0.5), 0.8 * (unit(&mut rng) - 0.5), 2.0 * PI * unit(&mut rng));
        r.case(
            format!("polygon/{k:03}"),
            params!("g" => g, "theta" => format!("{theta:.6}"), "boost" => format!("{b1:.4},{b2:.4}")),
            1e-8,
            || {
                let poly = build_parallel_polygon(g, theta).map_err(err)?;
                let m = CircleMobius::rotation(psi).compose(&CircleMobius::boost(b1, b2));
                let image = m.apply_polygon(&poly).map_err(err)?;
                lie_change(&poly, &image)
            },
        );
    }
    for k in 0..20u64 {
        let g = if k % 2 == 0 { 4 } else { 6 };
        let (b1, b2) = (0.8 * (unit(&mut rng) - 0.5), 0.8 * (unit(&mut rng) - 0.5));
        r.case(format!("normalize/{k:03}"), params!("g" => g, "boost" => format!("{b1:.4},{b2:.4}")), 1e-8, || {
            let poly = CircleMobius::boost(b1, b2).apply_polygon(&build_parallel_polygon(g, 0.0).map_err(err)?).map_err(err)?;
            let (_, normal) = conformal_normalize(&poly).map_err(err)?;
            lie_change(&poly, &normal)
        });
    }
}

fn random_gaps(rng: &mut ChaCha8Rng, g: usize) -> AngleGaps {
    let mut seq = || {
        let w: Vec<f64> = (0..g).map(|_| 0.7 + 0.6 * unit(rng)).collect();
        let s: f64 = w.iter().sum();
        w.iter().map(|x| PI * x / s).collect::<Vec<f64>>()
    };
    let (odd, even) = (seq(), seq());
    AngleGaps::from_free(&odd[..g - 1], &even[..g - 1]).expect("gaps near uniform")
}

fn cross_ratio_identity(r: &mut Runner) {
    let mut rng = rng_for(r.seed, 2);
    for k in 0..500 {
        let mut th: Vec<f64> = (0..4).map(|_| 0.01 + (PI - 0.02) * unit(&mut rng)).collect();
        th.sort_by(f64::total_cmp);
        r.case(format!("quadruple/{k:03}"), params!("radii" => format!("{th:.4?}")), 1e-10, || {
            let lam = [0, 1, 2, 3].map(|i| 1.0 / th[i].tan());
            let w = [0, 1, 2, 3].map(|i| Complex64::from_polar(1.0, 2.0 * th[i]));
            let mut worst = 0.0f64;
            for pairing in [Pairing::Diagonal, Pairing::Adjacent] {
                let phi = lie_curvature_of_values(lam, pairing).map_err(err)?;
                let [a, b, c, d] = pairing.arrange(w);
                let cr = cross_ratio(a, b, c, d).map_err(err)?;
                worst = worst.max((cr - phi).norm() / phi.abs().max(1.0));
            }
            Ok(worst)
        });
    }
    for k in 0..200 {
        let g = if k % 2 == 0 { 4 } else { 6 };
        // redraw until the table is valid
        let (base, poly) = loop {
            let gaps = random_gaps(&mut rng, g);
            let s = 0.2 + 0.6 * unit(&mut rng);
            let base = s * gaps.odd().iter().chain(gaps.even()).cloned().fold(f64::INFINITY, f64::min);
            if let Ok(poly) = angle_table(&gaps, base, base) {
                break (base, poly);
            }
        };
        r.case(format!("polygon/{k:03}"), params!("g" => g, "base" => format!("{base:.6}")), 1e-10, || {
            let mut worst = 0.0f64;
            for t in 1..=poly.vertex_count() {
                for p in polygon_patterns(g) {
                    let a = polygon_lie_curvature(&poly, t, p).map_err(err)?;
                    let b = vertex_lie_curvature(&poly, t, p).map_err(err)?;
                    worst = worst.max((a - b).abs() / a.abs().max(1.0));
                }
            }
            Ok(worst)
        });
    }
}

fn isoparametric_formulas(r: &mut Runner) {
    for g in [3, 4, 6] {
        for (m1, m2) in multiplicities(g) {
            for (k, theta) in theta_grid(g, 20).into_iter().enumerate() {
                let p = params!("g" => g, "m1" => m1, "m2" => m2, "theta" => format!("{theta:.6}"));
                let id = format!("g{g}-m{m1}-{m2}-t{k:02}");
                r.case(format!("{id}/scalar"), p.clone(), 1e-8, || {
                    let inv = IsoparametricFamily::new(g, m1, m2, theta).map_err(err)?.scalar_curvature();
                    let rs = inv.specialized_scalar_curvature.ok_or("no closed form")?;
                    Ok((rs - inv.scalar_curvature).abs() / inv.scalar_curvature.abs().max(1.0))
                });
                r.case(format!("{id}/mean"), p.clone(), 1e-8, || {
                    let f = IsoparametricFamily::new(g, m1, m2, theta).map_err(err)?;
                    let h = f.mean_curvature();
                    Ok((h - f.mean_curvature_direct()).abs() / h.abs().max(1.0))
                });
                r.case(format!("{id}/inverse"), p, 1e-10, || {
                    let h = IsoparametricFamily::new(g, m1, m2, theta).map_err(err)?.mean_curvature();
                    Ok((theta_from_mean_curvature(g, m1, m2, h).map_err(err)? - theta).abs())
                });
            }
            if g != 3 {
                r.case(format!("g{g}-m{m1}-{m2}/minimal"), params!("g" => g, "m1" => m1, "m2" => m2), 1e-8, || {
                    let theta = minimal_theta(g, m1, m2).map_err(err)?;
                    let inv = IsoparametricFamily::new(g, m1, m2, theta).map_err(err)?.scalar_curvature();
                    let want = if g == 4 {
                        let k = (m1 + m2) as f64;
                        4.0 * k * (k - 2.0)
                    } else {
                        36.0 * m1 as f64 * (m1 as f64 - 1.0)
                    };
                    Ok(inv.mean_curvature.abs().max((inv.scalar_curvature - want).abs() / want.max(1.0)))
                });
            }
        }
    }
}

fn gap_error(gaps: &AngleGaps, want: f64) -> f64 {
    gaps.odd().iter().chain(gaps.even()).map(|v| (v - want).abs()).fold(0.0, f64::max)
}

fn angle_solvers(r: &mut Runner) {
    r.case("g4/solution".into(), params!("expected" => "pi/4"), 1e-10, || Ok(gap_error(&solve_g4_normalized(), FRAC_PI_4)));
    r.case("g6/solution".into(), params!("expected" => "pi/6"), 1e-10, || Ok(gap_error(&solve_g6_normalized(), PI / 6.0)));
    r.case("g4/residual".into(), Params::new(), 1e-10, || Ok(g4_residual(&solve_g4_normalized()).map_err(err)?.norm()));
    r.case("g6/psi".into(), Params::new(), 1e-9, || {
        let psi = psi_values(&solve_g6_normalized()).map_err(err)?;
        Ok(psi.iter().map(|p| (p + 1.0).abs()).fold(0.0, f64::max))
    });
    r.case("g6/case-analysis".into(), Params::new(), 0.0, || {
        let accepted: Vec<_> = g6_case_analysis().into_iter().filter(|c| c.accepted).collect();
        match accepted.as_slice() {
            [c] => Ok((c.x - 0.5).abs().max((c.y - 0.5).abs())),
            _ => Err(format!("{} accepted candidates", accepted.len())),
        }
    });
    for k in 1..20 {
        let a = k as f64 * PI / 40.0;
        r.case(format!("g4/family/{k:02}"), params!("alpha" => format!("{a:.6}")), 1e-10, || {
            Ok(g4_residual(&g4_normalized_family(a).map_err(err)?).map_err(err)?.norm())
        });
    }
    for k in 1..40 {
        let a = k as f64 * PI / 80.0;
        if let Some(gaps) = g6_normalized_family(a) {
            r.case(format!("g6/family/{k:02}"), params!("alpha" => format!("{a:.6}")), 1e-9, || {
                let psi = psi_values(&gaps).map_err(err)?;
                Ok(psi.iter().map(|p| (p + 1.0).abs()).fold(0.0, f64::max))
            });
        }
    }
    for g in [3, 4, 6] {
        for (k, theta) in theta_grid(g, 10).into_iter().enumerate() {
            r.case(format!("g{g}/parallel-links/{k:02}"), params!("g" => g, "theta" => format!("{theta:.6}")), 1e-9, || {
                Ok(link_check(&build_parallel_polygon(g, theta).map_err(err)?).max_residual)
            });
        }
    }
}

fn dji_kernels(r: &mut Runner) {
    let systems: [(usize, &[Constraint], &str); 3] = [
        (4, &[Constraint::Cmc, Constraint::Csc], "cmc+csc"),
        (4, &[Constraint::Cmc, Constraint::Clc], "cmc+clc"),
        (6, &[Constraint::Cmc, Constraint::Clc], "cmc+clc"),
    ];
    for (g, cs, label) in systems {
        for (m1, m2) in multiplicities(g) {
            for (k, theta) in theta_grid(g, 15).into_iter().enumerate() {
                let p = params!("g" => g, "constraints" => label, "m1" => m1, "m2" => m2, "theta" => format!("{theta:.6}"));
                r.case(format!("g{g}-{label}-m{m1}-{m2}-t{k:02}"), p, 0.0, || {
                    let pcs = IsoparametricFamily::new(g, m1, m2, theta).map_err(err)?.principal_curvatures();
                    let sys = build_system(g, &pcs, m1, m2, cs, &critical_pinning(g)).map_err(err)?;
                    Ok(kernel_analysis(&sys).dimension as f64)
                });
            }
        }
    }
}

/// How far a certificate is from holding with margin `1e−6`; zero when it holds.
fn certificate_shortfall(value: f64, claimed: Sign) -> f64 {
    let margin = dupin_core::derivatives::CERTIFICATE_MARGIN;
    match claimed {
        Sign::Positive => (margin - value).max(0.0),
        Sign::Negative => (value + margin).max(0.0),
        Sign::Zero => (value.abs() - margin).max(0.0),
    }
}

fn sign_certificate_suite(r: &mut Runner) {
    for g in [4, 6] {
        for (k, theta) in theta_grid(g, 19).into_iter().enumerate() {
            let pcs = match IsoparametricFamily::new(g, 1, 1, theta) {
                Ok(f) => f.principal_curvatures(),
                Err(e) => {
                    r.case(format!("g{g}-t{k:02}"), Params::new(), 0.0, || Err(err(e)));
                    continue;
                }
            };
            match sign_certificates(g, &pcs) {
                Ok(certs) => {
                    for (j, c) in certs.into_iter().enumerate() {
                        let p = params!("g" => g, "theta" => format!("{theta:.6}"), "name" => c.name, "claimed" => c.claimed.name(), "value" => c.value);
                        r.case(format!("g{g}-t{k:02}-c{j:02}"), p, 0.0, || Ok(certificate_shortfall(c.value, c.claimed)));
                    }
                }
                Err(e) => r.case(format!("g{g}-t{k:02}"), Params::new(), 0.0, || Err(err(e))),
            }
        }
    }
}

fn isometry_reduction_suite(r: &mut Runner) {
    for g in [4, 6] {
        for (m1, m2) in multiplicities(g) {
            for (k, theta) in theta_grid(g, 15).into_iter().enumerate() {
                let p = params!("g" => g, "m1" => m1, "m2" => m2, "theta" => format!("{theta:.6}"));
                r.case(format!("g{g}-m{m1}-{m2}-t{k:02}"), p, 1e-10, || {
                    let red = isometry_reduction(&build_parallel_polygon(g, theta).map_err(err)?, m1, m2).map_err(err)?;
                    Ok(red.x.abs().max(red.y.abs()))
                });
            }
        }
    }
}

/// Number of non-parallel survivors; every configuration here is expected to
/// leave only parallel polygons.
fn constraint_search_suite(r: &mut Runner) {
    let runs: [(usize, &[Constraint]); 4] = [
        (3, &[Constraint::Cmc]),
        (4, &[Constraint::Cmc, Constraint::Csc]),
        (4, &[Constraint::Cmc, Constraint::Clc]),
        (6, &[Constraint::Cmc, Constraint::Clc]),
    ];
    let seed = r.seed;
    for (g, cs) in runs {
        let label: Vec<&str> = cs.iter().map(|c| c.name()).collect();
        let label = label.join("+");
        let grid = 25;
        let report = constraint_search(&SearchConfig::new(g, cs, grid, seed));
        let p = match &report {
            Ok(rep) => params!("g" => g, "constraints" => label, "grid" => grid, "survivors" => rep.survivors.len()),
            Err(_) => params!("g" => g, "constraints" => label, "grid" => grid),
        };
        r.case(format!("g{g}-{label}"), p, 0.0, || report.map(|rep| rep.non_parallel() as f64).map_err(err));
    }
}

/// Runs one suite (or all of them); cases are ordered by `case_id`.
pub fn run_suite(suite: Suite, seed: u64, tol: Option<f64>) -> Vec<VerificationCase> {
    if suite == Suite::All {
        let mut all: Vec<VerificationCase> = Suite::EACH.iter().flat_map(|s| run_suite(*s, seed, tol)).collect();
        all.sort_by(|a, b| a.case_id.cmp(&b.case_id));
        return all;
    }
    let mut r = Runner::new(suite, seed, tol);
    match suite {
        Suite::LieInvariance => lie_invariance(&mut r),
        Suite::CrossRatioIdentity => cross_ratio_identity(&mut r),
        Suite::IsoparametricFormulas => isoparametric_formulas(&mut r),
        Suite::AngleSolvers => angle_solvers(&mut r),
        Suite::DjiKernels => dji_kernels(&mut r),
        Suite::SignCertificates => sign_certificate_suite(&mut r),
        Suite::IsometryReduction => isometry_reduction_suite(&mut r),
        Suite::ConstraintSearch => constraint_search_suite(&mut r),
        Suite::All => unreachable!(),
    }
    r.cases.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    r.cases
}

/// [`run_suite`] by name; unknown names are a usage error.
pub fn run_suite_named(name: &str, seed: u64, tol: Option<f64>) -> Result<Vec<VerificationCase>, CliError> {
    Ok(run_suite(Suite::parse(name)?, seed, tol))
}
