//! Curvature of Euclidean Schwarzschild against hand-derived closed forms and
//! the finite-difference oracle, and chart round trips.

use proptest::prelude::*;
use schwarzschild_flow::cli::{sample_radii, Settings};
use schwarzschild_flow::geometry::{
    max_ricci, oracle_parity, riemann, sectional_bound_check, to_p, to_r, Blend, ChartPoint, FaultInjection,
    FlatProduct, SChart, Schwarzschild, SphereProduct,
};

proptest! {
    /// Γ and K from the explicit formulas for A = 1 − 1/r, B = 1/A, C = r².
    #[test]
    fn closed_forms_at_any_radius(r in 1.01f64..200.0) {
        let c = riemann(&Schwarzschild, ChartPoint::r(r).unwrap()).unwrap();
        let g = &c.christoffel;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + b.abs());
        prop_assert!(close(g[1][0][0], -(1.0 - 1.0 / r) / (2.0 * r * r)));
        prop_assert!(close(g[0][0][1], 1.0 / (2.0 * r * (r - 1.0))));
        prop_assert!(close(g[1][1][1], -1.0 / (2.0 * r * (r - 1.0))));
        prop_assert!(close(g[2][1][2], 1.0 / r));
        prop_assert!(close(g[1][2][2], -(r - 1.0)));
        let k = 1.0 / (r * r * r);
        let expected = [[0.0, k, -k / 2.0, -k / 2.0], [k, 0.0, -k / 2.0, -k / 2.0], [-k / 2.0, -k / 2.0, 0.0, k], [-k / 2.0, -k / 2.0, k, 0.0]];
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!(close(c.sectional[i][j], expected[i][j]), "K_{i}{j} at r = {r}");
                prop_assert!(c.ricci[i][j].abs() <= 1e-12 * (1.0 + 1.0 / (r - 1.0)));
            }
        }
        prop_assert!(close(c.riem_norm_sq, 12.0 / r.powi(6)));
    }

    #[test]
    fn p_chart_round_trip(r in 1.000001f64..1e6) {
        let p = to_p(r).unwrap();
        prop_assert!(p > 0.0 && p < 1.0);
        prop_assert!((to_r(p).unwrap() - r).abs() <= 1e-9 * r);
    }

    #[test]
    fn s_chart_round_trip_and_monotone(r in 1.0001f64..100.0, dr in 1e-6f64..1.0) {
        for blend in [Blend::CubicHermite, Blend::QuinticHermite] {
            let chart = SChart::new(blend).unwrap();
            let s = chart.to_s(r).unwrap();
            prop_assert!((chart.s_inverse(s).unwrap() - r).abs() <= 1e-9 * r);
            prop_assert!(chart.to_s(r + dr).unwrap() > s);
        }
    }
}

#[test]
fn oracle_parity_on_seeded_radii() {
    let radii = sample_radii(&Settings::default()).unwrap();
    let rows = oracle_parity(&Schwarzschild, &radii, &FaultInjection::default()).unwrap();
    // 7 Christoffel symbols and 6 R_ijij per radius.
    assert_eq!(rows.len(), 13 * radii.len());
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");
    assert!(max_ricci(&Schwarzschild, &radii).unwrap() <= 1e-9);
    let sec = sectional_bound_check(&Schwarzschild, &radii).unwrap();
    assert!(sec.holds && (sec.max_ratio - 1.0).abs() <= 1e-12);
}

#[test]
fn flipped_signs_are_caught_per_component() {
    let radii = [1.3, 4.0, 20.0];
    for name in ["Gamma^1_00", "R_2323", "R_0101"] {
        let fault = FaultInjection { flip_sign: vec![name.to_string()] };
        let rows = oracle_parity(&Schwarzschild, &radii, &fault).unwrap();
        for row in &rows {
            assert_eq!(row.rel_err > 1.0, row.component == name, "{} at {}", row.component, row.r);
        }
    }
}

#[test]
fn flat_and_sphere_products() {
    let radii = [1.5, 3.0, 9.0];
    for &r in &radii {
        let c = riemann(&FlatProduct, ChartPoint::r(r).unwrap()).unwrap();
        assert!(c.sectional.iter().flatten().all(|k| k.abs() < 1e-14));
    }
    let sphere = SphereProduct { radius: 2.0 };
    let c = riemann(&sphere, ChartPoint::r(5.0).unwrap()).unwrap();
    assert!((c.sectional[2][3] - 0.25).abs() < 1e-14);
    let rep = sectional_bound_check(&sphere, &radii).unwrap();
    assert!(!rep.holds);
    assert_eq!(rep.argmax_plane, [2, 3]);
}

#[test]
fn interior_radii_are_domain_errors() {
    assert!(ChartPoint::r(0.5).is_err());
    assert!(to_p(1.0).is_err());
    assert!(to_r(1.0).is_err());
    assert!(oracle_parity(&Schwarzschild, &[0.9], &FaultInjection::default()).is_err());
}
