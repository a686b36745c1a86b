use proptest::prelude::*;
use twocenter::coords::{cartesian_to_elliptic, elliptic_to_cartesian, EllipticPoint, Sheet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn elliptic_round_trip(
        log_xm1 in (1e-6f64).ln()..(49.0f64).ln(),
        eta in -0.999f64..0.999,
        upper in any::<bool>(),
        r in 0.05f64..20.0,
    ) {
        let xi = 1.0 + log_xm1.exp();
        let sheet = if upper { Sheet::Upper } else { Sheet::Lower };
        let pt = EllipticPoint::from_xi_eta(xi, eta, sheet);
        let (x1, x2) = elliptic_to_cartesian(&pt, r);
        // independent forward map from the two center distances
        let (r1, r2) = ((x1 - r / 2.0).hypot(x2), (x1 + r / 2.0).hypot(x2));
        prop_assert!(((r1 + r2) / r - xi).abs() <= 1e-12 * xi);
        let back = cartesian_to_elliptic(x1, x2, r);
        prop_assert!((back.xi - xi).abs() <= 1e-12 * xi, "xi {xi} -> {}", back.xi);
        prop_assert!((back.eta - eta).abs() <= 1e-12, "eta {eta} -> {}", back.eta);
        prop_assert_eq!(back.sheet, sheet);
    }

    #[test]
    fn jacobian_is_positive_off_the_boundary(xi in 1.0f64 + 1e-9..60.0, eta in -0.999999f64..0.999999, r in 1e-3f64..50.0) {
        let pt = EllipticPoint::from_xi_eta(xi, eta, Sheet::Upper);
        prop_assert!(pt.jacobian(r) > 0.0);
    }
}

#[test]
fn reference_points() {
    let r = 1.7;
    let c1 = cartesian_to_elliptic(r / 2.0, 0.0, r);
    assert_eq!((c1.xi, c1.eta), (1.0, 1.0));
    let c2 = cartesian_to_elliptic(-r / 2.0, 0.0, r);
    assert_eq!((c2.xi, c2.eta), (1.0, -1.0));
    let mid = cartesian_to_elliptic(0.0, 0.0, r);
    assert_eq!((mid.xi, mid.eta), (1.0, 0.0));
    assert!(mid.focal);
    let top = cartesian_to_elliptic(0.0, r / 2.0, r);
    assert!((top.xi - 2f64.sqrt()).abs() < 1e-15 && top.eta == 0.0);
}

#[test]
fn one_to_one_angle_matches_the_two_sheet_form() {
    let r = 2.0;
    for &(x1, x2) in &[(0.3, 0.8), (-1.4, -0.2), (2.5, 1e-3), (-0.9, -1e-4)] {
        let p = cartesian_to_elliptic(x1, x2, r);
        assert!((p.nu.cos() - p.eta).abs() < 1e-12);
        assert_eq!(p.nu >= 0.0, p.sheet == Sheet::Upper);
        let q = EllipticPoint::from_xi_nu(p.xi, p.nu);
        let (y1, y2) = elliptic_to_cartesian(&q, r);
        assert!((y1 - x1).abs() < 1e-12 && (y2 - x2).abs() < 1e-12, "({x1},{x2}) -> ({y1},{y2})");
    }
}
