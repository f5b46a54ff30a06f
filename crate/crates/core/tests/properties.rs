use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use intgeo::abel::{abel_forward, spherical_function, spherical_function_circle, RadialField};
use intgeo::geometry::disk::{busemann, hyp_distance, poisson_kernel, DiskIsometry, HypPoint};
use intgeo::geometry::phantom::RadialProfile;
use intgeo::horocycle::s_hat;
use intgeo::numerics::cfunc::c_density;
use intgeo::numerics::gauss::gauss_legendre;
use intgeo::report::{Criterion, ReportRow};
use intgeo::QuadratureSpec;

fn disk_point() -> impl Strategy<Value = HypPoint> {
    (0.0..3.0f64, 0.0..2.0 * PI).prop_map(|(r, a)| HypPoint::from_polar(r, a))
}

fn isometry() -> impl Strategy<Value = DiskIsometry> {
    (disk_point(), 0.0..2.0 * PI).prop_map(|(p, rot)| DiskIsometry {
        a: p.z(),
        rotation: rot,
    })
}

proptest! {
    #[test]
    fn isometries_preserve_distance(z in disk_point(), w in disk_point(), g in isometry()) {
        let d = hyp_distance(&z, &w);
        let dg = hyp_distance(&g.apply(&z), &g.apply(&w));
        prop_assert!((d - dg).abs() <= 1e-9 * (1.0 + d));
        let back = g.apply_inverse(&g.apply(&z));
        prop_assert!(hyp_distance(&back, &z) < 1e-7);
    }

    #[test]
    fn triangle_inequality(a in disk_point(), b in disk_point(), c in disk_point()) {
        prop_assert!(hyp_distance(&a, &c) <= hyp_distance(&a, &b) + hyp_distance(&b, &c) + 1e-9);
    }

    #[test]
    fn busemann_bounded_by_distance(z in disk_point(), theta in 0.0..2.0 * PI) {
        // |A(z, b)| ≤ d(o, z), with equality on the geodesic ray toward b
        prop_assert!(busemann(&z, theta).abs() <= z.distance_from_origin() + 1e-9);
    }

    #[test]
    fn poisson_kernel_has_unit_mean(r in 0.0..2.0f64, a in 0.0..2.0 * PI) {
        let z = HypPoint::from_polar(r, a);
        let m = 2048;
        let mean = (0..m).map(|j| poisson_kernel(&z, 2.0 * PI * j as f64 / m as f64)).sum::<f64>() / m as f64;
        prop_assert!((mean - 1.0).abs() < 1e-10);
    }

    #[test]
    fn c_density_matches_closed_form(l in 0.05..8.0f64) {
        let closed = PI * l * (PI * l).tanh();
        prop_assert!((c_density(l) - closed).abs() <= 1e-6 * closed);
    }

    #[test]
    fn s_hat_is_unimodular(n in -6i64..=6, l in -50.0..50.0f64) {
        let s = s_hat(n, l);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        prop_assert!((s_hat(n, -l) - s.conj()).norm() < 1e-12);
    }

    #[test]
    fn gauss_legendre_exact_on_polynomials(n in 2usize..24, coeffs in prop::collection::vec(-1.0..1.0f64, 1..8)) {
        let deg = (coeffs.len() - 1).min(2 * n - 1);
        let c = &coeffs[..=deg];
        let rule = gauss_legendre(n);
        let got = rule.integrate(-1.0, 2.0, |x| c.iter().rev().fold(0.0, |acc, &a| acc * x + a));
        let exact: f64 = c.iter().enumerate().map(|(k, a)| a * (2f64.powi(k as i32 + 1) - (-1f64).powi(k as i32 + 1)) / (k as f64 + 1.0)).sum();
        prop_assert!((got - exact).abs() < 1e-12 * (1.0 + exact.abs()));
    }

    #[test]
    fn spherical_function_even_and_circle_average(l in 0.0..6.0f64, t in 0.0..4.0f64) {
        let lam = Complex64::new(l, 0.0);
        let a = spherical_function(lam, t);
        prop_assert!((a - spherical_function(lam, -t)).norm() < 1e-10);
        prop_assert!((a - spherical_function(-lam, t)).norm() < 1e-10);
        let b = spherical_function_circle(lam, t, 4096);
        prop_assert!((a - b).norm() < 1e-8 * (1.0 + b.norm()));
    }

    #[test]
    fn report_pass_flag(err in 0.0..2.0f64, tol in 1e-6..1.0f64) {
        let r = ReportRow::residual("p", "x", err, tol);
        prop_assert_eq!(r.pass, err <= tol);
        let n = ReportRow::new("p", "x", err, 0.0, tol, Criterion::ExpectedFail);
        prop_assert_eq!(n.pass, err > tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn abel_transform_is_even(t in 0.0..3.0f64, width in 0.6..1.5f64) {
        let f = RadialField::from_profile(RadialProfile::Gaussian { amplitude: 1.0, width });
        let spec = QuadratureSpec::default();
        let a = abel_forward(&f, t, &spec).unwrap();
        let b = abel_forward(&f, -t, &spec).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        prop_assert!(a > 0.0);
    }
}
