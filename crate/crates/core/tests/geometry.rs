use proptest::prelude::*;
use torus_core::geometry::{half_width_a, k_of, natural_u, torus_point, TorusGeometry};
use torus_core::oracle::{quad_half_width, QuadratureSpec};

#[test]
fn half_width_from_gamma_and_from_quadrature() {
    let gamma = half_width_a(1.0).unwrap();
    assert!((gamma - 1.31103).abs() < 1e-5);
    let quad = quad_half_width(1.0, &QuadratureSpec::default()).unwrap();
    assert!((gamma - quad).abs() < 1e-8);
}

proptest! {
    #[test]
    fn surface_points_stay_on_the_torus(a in 1.001f64..50.0, theta in -20.0f64..20.0) {
        let g = TorusGeometry::new(a).unwrap();
        let p = torus_point(&g, theta).unwrap();
        prop_assert!(p.rho >= 1.0 - 1.0 / a - 1e-15 && p.rho <= 1.0 + 1.0 / a + 1e-15);
        prop_assert!(p.rho > 0.0);
        prop_assert!((0.0..std::f64::consts::TAU).contains(&p.theta));
        prop_assert!(k_of(p.rho, p.z).unwrap() >= 0.0);
    }

    #[test]
    fn half_width_scales_as_one_over_k(k in 1e-3f64..1e3) {
        let c = half_width_a(1.0).unwrap();
        prop_assert!((half_width_a(k).unwrap() * k / c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u_is_decreasing_and_bounded(k in 0.1f64..5.0, z in -20.0f64..20.0, dz in 0.01f64..3.0) {
        let u0 = natural_u(k, z, 1e-10).unwrap();
        let u1 = natural_u(k, z + dz, 1e-10).unwrap();
        prop_assert!(u1 < u0);
        let w = half_width_a(k).unwrap();
        prop_assert!(u0.abs() < w && u1.abs() < w);
    }
}
