use dupin_core::derivatives::*;
use dupin_core::isoparametric::{minimal_theta, IsoparametricFamily};
use dupin_core::polygon::{build_parallel_polygon, Constraint};
use proptest::prelude::*;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn pcs(g: usize, m1: u32, m2: u32, theta: f64) -> Vec<f64> {
    IsoparametricFamily::new(g, m1, m2, theta).unwrap().principal_curvatures()
}

fn theta_grid(g: usize) -> Vec<f64> {
    let b = std::f64::consts::PI / (2.0 * g as f64);
    (-19..=19).map(|k| b * k as f64 / 20.0).collect()
}

fn systems(g: usize, p: &[f64], m1: u32, m2: u32) -> Vec<DerivativeSystem> {
    let pin = critical_pinning(g);
    let mut out = vec![build_system(g, p, m1, m2, &[Constraint::Cmc, Constraint::Clc], &pin).unwrap()];
    if g == 4 {
        out.push(build_system(g, p, m1, m2, &[Constraint::Cmc, Constraint::Csc], &pin).unwrap());
    }
    out
}

#[test]
fn kernels_are_trivial_along_the_families() {
    for (m1, m2) in [(1, 1), (1, 2), (2, 1), (3, 4), (7, 8)] {
        for theta in theta_grid(4) {
            for sys in systems(4, &pcs(4, m1, m2, theta), m1, m2) {
                assert_eq!(kernel_analysis(&sys).dimension, 0, "g=4 m=({m1},{m2}) θ={theta}");
            }
        }
    }
    for theta in theta_grid(6) {
        for sys in systems(6, &pcs(6, 1, 1, theta), 1, 1) {
            assert_eq!(kernel_analysis(&sys).dimension, 0, "g=6 θ={theta}");
        }
    }
}

#[test]
fn dodecagon_kernel_is_trivial_without_auxiliary_rows() {
    let p = pcs(6, 1, 1, 0.0);
    let sys = build_system_with_patterns(
        6,
        &p,
        1,
        1,
        &[Constraint::Cmc, Constraint::Clc],
        &dodecagon_lie_patterns(),
        &critical_pinning(6),
    )
    .unwrap();
    assert_eq!(kernel_analysis(&sys).dimension, 0);
}

#[test]
fn octagon_lie_system_with_full_first_pinning() {
    let p = pcs(4, 1, 1, 0.0);
    let sys = build_system(4, &p, 1, 1, &[Constraint::Cmc, Constraint::Clc], &full_first_pinning(4)).unwrap();
    assert_eq!(sys.unknowns(), 6);
    assert_eq!(kernel_analysis(&sys).dimension, 0);
}

#[test]
fn kernel_is_stable_under_small_perturbation() {
    let mut p = pcs(6, 1, 1, 0.0);
    let base = kernel_analysis(&systems(6, &p, 1, 1)[0]).dimension;
    for (k, x) in p.iter_mut().enumerate() {
        *x += 1e-8 * (k as f64 + 1.0);
    }
    let sys = &systems(6, &p, 1, 1)[0];
    let r = kernel_analysis(sys);
    assert_eq!(r.dimension, base);
    assert!(r.near_threshold.is_empty());
}

#[test]
fn no_constraints_no_pinning_keeps_every_unknown() {
    let sys = build_system(6, &pcs(6, 1, 1, 0.0), 1, 1, &[], &[]).unwrap();
    let r = kernel_analysis(&sys);
    assert_eq!(r.dimension, 30);
    assert_eq!(r.basis.len(), 30);
}

#[test]
fn rows_have_no_accidental_zeros() {
    // a single nonzero unknown leaves residual at least ε times its smallest
    // nonzero coefficient
    for g in [4, 6] {
        for sys in systems(g, &pcs(g, 1, 1, 0.1 / g as f64), 1, 1) {
            let a = sys.rows();
            let eps = 1e-3;
            for c in 0..a.cols() {
                let col: Vec<f64> = (0..a.rows()).map(|r| a[(r, c)]).collect();
                let min_nonzero = col.iter().map(|v| v.abs()).filter(|v| *v > 1e-12).fold(f64::INFINITY, f64::min);
                let mut x = vec![0.0; a.cols()];
                assert!(a.mul_vec(&x).unwrap().iter().all(|v| *v == 0.0));
                x[c] = eps;
                let res = a.mul_vec(&x).unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
                assert!(res >= eps * min_nonzero * (1.0 - 1e-12));
            }
        }
    }
}

#[test]
fn certificates_hold_with_margin_along_the_families() {
    for g in [4, 6] {
        for theta in theta_grid(g) {
            for c in sign_certificates(g, &pcs(g, 1, 1, theta)).unwrap() {
                assert!(c.holds(), "g={g} θ={theta} {} = {}", c.name, c.value);
            }
        }
    }
}

#[test]
fn minimal_dodecagon_certificate_values() {
    let p = pcs(6, 1, 1, 0.0);
    let certs = sign_certificates(6, &p).unwrap();
    let get = |name: &str| certs.iter().find(|c| c.name == name).unwrap().value;
    assert!((get("1 - v_3/w_3 - v_4/w_4 - v_6/w_6") - (9.0 - 2.0 * SQRT3)).abs() < 1e-10);
    assert!(get("row j=3 coefficient") > 5.0);
    assert!(get("row j=4 coefficient") < 0.0);
    for (h, v) in [(2, -2.0), (5, 2.0), (6, 4.0)] {
        assert!((get(&format!("ratio j=3 h={h}")) - v).abs() < 1e-10);
    }
    for (h, v) in [(2, 3.0), (5, -1.0), (6, -3.0)] {
        assert!((get(&format!("ratio j=4 h={h}")) - v).abs() < 1e-10);
    }
    let (total, terms) = g6_d5_obstruction_terms(&p).unwrap();
    assert!((total - (-12.0 - 24.0 * SQRT3)).abs() < 1e-9);
    assert!(terms.iter().all(|t| *t < 0.0));
}

#[test]
fn octagon_opposite_sign_pairs_are_minus_two() {
    for theta in theta_grid(4) {
        let certs = sign_certificates(4, &pcs(4, 1, 1, theta)).unwrap();
        assert!((certs[1].value + 2.0).abs() < 1e-9);
        assert!((certs[2].value + 2.0).abs() < 1e-9);
    }
}

#[test]
fn recover_pair_matches_parallel_octagon_vertices() {
    for (m1, m2) in [(1, 1), (2, 5), (4, 3)] {
        for theta in theta_grid(4) {
            let poly = build_parallel_polygon(4, theta).unwrap();
            let mult = [m1 as f64, m2 as f64, m1 as f64, m2 as f64];
            for t in 1..=8 {
                let l = poly.curvatures(t);
                let h = poly.mean_curvature(t, &mult);
                let (mu, tau) = recover_pair(l[0], l[2], h, m1, m2).unwrap();
                assert!((mu - l[1]).abs() < 1e-10 * (1.0 + l[1].abs()), "θ={theta} t={t}");
                assert!((tau - l[3]).abs() < 1e-10 * (1.0 + l[3].abs()), "θ={theta} t={t}");
            }
        }
    }
}

#[test]
fn recover_pair_at_the_minimal_octagon() {
    let s2 = std::f64::consts::SQRT_2;
    let p = pcs(4, 1, 1, minimal_theta(4, 1, 1).unwrap());
    let (mu, tau) = recover_pair(p[0], p[2], 0.0, 1, 1).unwrap();
    assert!((mu - (s2 - 1.0)).abs() < 1e-12);
    assert!((tau + s2 + 1.0).abs() < 1e-12);
    let q = CurvatureQuadratic::new(s2 + 1.0, 1.0 - s2, 0.0, 1, 1).unwrap();
    assert!((q.a + 2.0).abs() < 1e-12 && (q.b + 1.0).abs() < 1e-12);
}

#[test]
fn recover_pair_discriminant() {
    // discriminant is (A − λ − ν)² − (λ − ν)²
    assert!(matches!(recover_pair(1.0, -0.9, 0.0, 1, 1), Err(dupin_core::Error::InconsistentData(_))));
    let q = CurvatureQuadratic::new(1.0, 0.9, 0.0, 1, 1).unwrap();
    assert!(q.discriminant() > 0.0);
}

fn decreasing_sextuple() -> impl Strategy<Value = Vec<f64>> {
    (-50.0f64..50.0, prop::collection::vec(1e-3f64..10.0, 5)).prop_map(|(start, steps)| {
        let mut v = vec![start];
        for s in steps {
            let last = *v.last().unwrap();
            v.push(last - s);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn d5_obstruction_is_negative(p in decreasing_sextuple()) {
        let (total, terms) = g6_d5_obstruction_terms(&p).unwrap();
        prop_assert!(total < 0.0);
        prop_assert!(terms.iter().all(|t| *t < 0.0));
    }
}
