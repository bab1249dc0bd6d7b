use std::f64::consts::PI;

use dupin_core::indefinite::{random_lie_transform, Signature, GROUP_TOL};
use dupin_core::isoparametric::{theta_from_mean_curvature, IsoparametricFamily};
use dupin_core::lie_sphere::{cross_ratio, lie_curvature_of_values, Pairing};
use dupin_core::polygon::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn patterns(g: usize) -> Vec<CurvaturePattern> {
    match g {
        3 => vec![],
        4 => vec![CurvaturePattern::OCTAGON_ADJACENT, CurvaturePattern::OCTAGON_DIAGONAL],
        _ => [3, 4, 6].iter().map(|h| CurvaturePattern::dodecagon(*h)).collect(),
    }
}

/// Gaps near uniform, so that tables built from them stay valid.
fn near_uniform_gaps(g: usize) -> impl Strategy<Value = AngleGaps> {
    let w = prop::collection::vec(0.7f64..1.3, 2 * g);
    w.prop_map(move |w| {
        let norm = |v: &[f64]| {
            let s: f64 = v.iter().sum();
            v.iter().map(|x| PI * x / s).collect::<Vec<f64>>()
        };
        let odd = norm(&w[..g]);
        let even = norm(&w[g..]);
        AngleGaps::from_free(&odd[..g - 1], &even[..g - 1]).unwrap()
    })
}

fn valid_table(g: usize) -> impl Strategy<Value = GeodesicPolygon> {
    (near_uniform_gaps(g), 0.2f64..0.8).prop_filter_map("table left the domain", move |(gaps, s)| {
        let base = s * gaps.odd().iter().chain(gaps.even()).cloned().fold(f64::INFINITY, f64::min);
        angle_table(&gaps, base, base).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cross_ratio_matches_curvature_ratio(mut r in prop::array::uniform4(0.01f64..PI - 0.01)) {
        r.sort_by(f64::total_cmp);
        prop_assume!(r.windows(2).all(|w| w[1] - w[0] > 1e-3));
        let lam = r.map(|x| 1.0 / x.tan());
        let w = r.map(|x| Complex64::from_polar(1.0, 2.0 * x));
        for pairing in [Pairing::Diagonal, Pairing::Adjacent] {
            let phi = lie_curvature_of_values(lam, pairing).unwrap();
            let [a, b, c, d] = pairing.arrange(w);
            let cr = cross_ratio(a, b, c, d).unwrap();
            prop_assert!((cr.re - phi).abs() <= 1e-10 * phi.abs().max(1.0));
            prop_assert!(cr.im.abs() <= 1e-10 * phi.abs().max(1.0));
        }
    }

    #[test]
    fn polygon_lie_curvature_matches_vertex_curvatures(
        poly in prop_oneof![valid_table(4), valid_table(6)],
    ) {
        for t in 1..=poly.vertex_count() {
            for p in patterns(poly.g()) {
                let a = polygon_lie_curvature(&poly, t, p).unwrap();
                let b = vertex_lie_curvature(&poly, t, p).unwrap();
                prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "t={} {} vs {}", t, a, b);
            }
        }
    }

    #[test]
    fn circle_transformations_keep_lie_curvatures(
        poly in prop_oneof![valid_table(4), valid_table(6)],
        b1 in -0.6f64..0.6,
        b2 in -0.6f64..0.6,
        psi in 0.0f64..std::f64::consts::TAU,
    ) {
        let m = CircleMobius::rotation(psi).compose(&CircleMobius::boost(b1, b2));
        let image = m.apply_polygon(&poly).unwrap();
        prop_assert!(link_check(&image).holds);
        for t in 1..=poly.vertex_count() {
            for p in patterns(poly.g()) {
                let a = polygon_lie_curvature(&poly, t, p).unwrap();
                let b = polygon_lie_curvature(&image, t, p).unwrap();
                prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn normalization_keeps_lie_curvatures(
        g in prop_oneof![Just(4usize), Just(6usize)],
        theta in -0.15f64..0.15,
        b1 in -0.5f64..0.5,
        b2 in -0.5f64..0.5,
    ) {
        let poly = build_parallel_polygon(g, theta / g as f64 * 4.0).unwrap();
        let moved = CircleMobius::boost(b1, b2).apply_polygon(&poly).unwrap();
        let (_, normal) = conformal_normalize(&moved).unwrap();
        for [s, t] in antipodal_targets(g).unwrap().map(|(s, t)| [s, t]) {
            let d = (normal.angle(t) - normal.angle(s) - PI).rem_euclid(2.0 * PI);
            prop_assert!(d.min(2.0 * PI - d) < 1e-8);
        }
        for t in 1..=poly.vertex_count() {
            for p in patterns(g) {
                let a = polygon_lie_curvature(&moved, t, p).unwrap();
                let b = polygon_lie_curvature(&normal, t, p).unwrap();
                prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn shifted_rows_rotate_back_to_the_first(poly in prop_oneof![valid_table(4), valid_table(6)]) {
        let g = poly.g();
        let odd = poly.row_gaps(1);
        let even = poly.row_gaps(2);
        for k in 1..g {
            let o = poly.row_gaps(2 * k + 1);
            let e = poly.row_gaps(2 * k + 2);
            for i in 0..g {
                prop_assert!((o[(i + g - k) % g] - odd[i]).abs() < 1e-12);
                prop_assert!((e[(i + k) % g] - even[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn isometry_reduction_is_trivial_on_parallel_polygons(
        theta in -0.95f64..0.95,
        m1 in 1u32..10,
        m2 in 1u32..10,
        g in prop_oneof![Just(4usize), Just(6usize)],
    ) {
        let m2 = if g == 6 { m1 } else { m2 };
        let poly = build_parallel_polygon(g, theta * PI / (2.0 * g as f64)).unwrap();
        let r = isometry_reduction(&poly, m1, m2).unwrap();
        prop_assert!(r.x.abs() <= 1e-10 && r.y.abs() <= 1e-10);
        prop_assert!(r.lambda_certificate < 0.0 && r.tau_certificate > 0.0);
    }

    #[test]
    fn octagon_residual_vanishes_on_parallel_polygons(theta in -0.39f64..0.39) {
        let poly = build_parallel_polygon(4, theta).unwrap();
        let gaps = AngleGaps::new(poly.row_gaps(1), poly.row_gaps(2)).unwrap();
        prop_assert!(g4_residual(&gaps).unwrap().norm() < 1e-12);
    }

    #[test]
    fn random_transforms_stay_in_the_group(seed in any::<u64>(), n in 2usize..6, scale in 0.0f64..2.0) {
        let l = random_lie_transform(Signature::lie(n), seed, scale).unwrap();
        prop_assert!(l.membership_residual() <= GROUP_TOL);
    }

    #[test]
    fn mean_curvature_inverts(
        g in prop_oneof![Just(2usize), Just(3), Just(4), Just(6)],
        s in -0.99f64..0.99,
        m1 in 1u32..8,
        m2 in 1u32..8,
    ) {
        let m2 = if g == 3 || g == 6 { m1 } else { m2 };
        let theta = s * PI / (2.0 * g as f64);
        let h = IsoparametricFamily::new(g, m1, m2, theta).unwrap().mean_curvature();
        let back = theta_from_mean_curvature(g, m1, m2, h).unwrap();
        prop_assert!((back - theta).abs() <= 1e-10);
    }
}

#[test]
fn family_members_all_solve_the_normalized_systems() {
    for k in 1..20 {
        let a = k as f64 * PI / 40.0;
        let gaps = g4_normalized_family(a).unwrap();
        assert!(g4_residual(&gaps).unwrap().norm() < 1e-12);
    }
    let mut found = 0;
    for k in 1..40 {
        if let Some(gaps) = g6_normalized_family(k as f64 * PI / 80.0) {
            let psi = psi_values(&gaps).unwrap();
            assert!(psi.iter().all(|p| (p + 1.0).abs() < 1e-9), "{psi:?}");
            found += 1;
        }
    }
    assert!(found > 10);
}
