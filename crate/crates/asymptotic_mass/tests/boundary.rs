use std::f64::consts::{PI, SQRT_2};

use asymptotic_mass::*;
use heisenberg_core::quad::{gauss_legendre, polar_point};
use heisenberg_core::{Complex64, Domain, Error, ScalarField};
use proptest::prelude::*;

const PI2: f64 = PI * PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn chart(radius: f64) -> SurfaceChart {
    SurfaceChart::new(radius, 64, 64)
}

#[test]
fn flux_of_rho_inv_sq() {
    let f = flux_rho_inv_sq().unwrap();
    assert!((f + 8.0 * PI).abs() < 1e-6, "{f}");
    let f2 = flux_rho_inv_sq_on(&chart(2.0)).unwrap();
    assert!((f2 - f).abs() < 1e-8);
}

#[test]
fn phi_t_integrand_identity_on_unit_sphere() {
    let s = chart(1.0);
    let weighted = phi_t_integral(&s, |p| p.r2() * p.r2() + p.t * p.t).unwrap();
    let plain = phi_t_integral(&s, |_| 1.0).unwrap();
    assert!((weighted - plain).abs() < 1e-12);
    assert!((plain - 4.0 * PI).abs() < 1e-12);
}

#[test]
fn boundary_identities_for_unit_mass() {
    assert!(rel(boundary_i43(1.0).unwrap(), 28.0 * PI2) < 5e-3);
    assert!(rel(boundary_i44(1.0).unwrap(), -20.0 * PI2) < 5e-3);
    assert!(rel(paneitz_boundary(1.0).unwrap(), -64.0 * PI2) < 5e-3);
    assert_eq!(boundary_i43(0.0).unwrap(), 0.0);
    assert_eq!(boundary_i44(0.0).unwrap(), 0.0);
    assert_eq!(paneitz_boundary(0.0).unwrap(), 0.0);
}

#[test]
fn half_disc_integral() {
    let v: f64 = gauss_legendre(-1.0, 1.0, 200).iter().map(|&(t, w)| w * (1.0 - t * t).sqrt()).sum();
    assert!((v - PI / 2.0).abs() < 1e-5);
    // 24 pi^2 A from the F, G terms plus 8 pi A * pi/2
    assert!((24.0 * PI2 + 8.0 * PI * v - 28.0 * PI2).abs() < 1e-3);
}

#[test]
fn jet_derivatives_match_explicit_expressions() {
    let a = 1.7;
    let zb = heisenberg_core::flat_z1bar(&beta_1bar_model(a));
    let tb = heisenberg_core::flat_t(&beta_1bar_model(a));
    let third = beta_minus1_third(a);
    for p in heisenberg_core::sample::sample_points(43, 40, 0.5, 5.0, 0.0) {
        let (z, r2, t) = (p.z(), p.r2(), p.t);
        let rho2 = (r2 * r2 + t * t).sqrt();
        let w = Complex64::new(r2, t);
        let wb = w.conj();
        let i = Complex64::i();
        let want_zb = -3.0 * PI * a * z * (i * t - r2) / rho2.powi(3) + 2.0 * a * z * wb * wb / rho2.powi(4);
        let want_t = 3.0 * SQRT_2 * PI * a * t / rho2.powi(3) + i * a * SQRT_2 / (w * w);
        let want_third = -12.0 * SQRT_2 * a * PI * z.conj() * z.conj() * w * w / rho2.powi(5);
        assert!((zb.value(&p).unwrap() - want_zb).norm() < 1e-12 * want_zb.norm().max(1.0));
        assert!((tb.value(&p).unwrap() - want_t).norm() < 1e-12 * want_t.norm().max(1.0));
        assert!((third.value(&p).unwrap() - want_third).norm() < 1e-12 * want_third.norm().max(1.0));
    }
}

#[test]
fn boundary_integrals_are_dilation_invariant() {
    let a = 0.8;
    let base = [boundary_i43(a).unwrap(), boundary_i44(a).unwrap(), paneitz_boundary(a).unwrap(), flux_rho_inv_sq().unwrap()];
    for lambda in [5.0, 25.0] {
        let c = chart(lambda);
        let got = [
            boundary_i43_on(a, &c).unwrap(),
            boundary_i44_on(a, &c).unwrap(),
            paneitz_boundary_on(a, &c).unwrap(),
            flux_rho_inv_sq_on(&c).unwrap(),
        ];
        for k in 0..4 {
            assert!(rel(got[k], base[k]) < 1e-10, "Lambda {lambda} [{k}]: {} vs {}", got[k], base[k]);
        }
    }
}

#[test]
fn boundary_values_converge_in_the_grid() {
    let a = 1.0;
    for (coarse, fine) in [((128, 64), (256, 128))] {
        let c = SurfaceChart::new(1.0, coarse.0, coarse.1);
        let f = SurfaceChart::new(1.0, fine.0, fine.1);
        for (x, y) in [
            (boundary_i43_on(a, &c).unwrap(), boundary_i43_on(a, &f).unwrap()),
            (boundary_i44_on(a, &c).unwrap(), boundary_i44_on(a, &f).unwrap()),
            (paneitz_boundary_on(a, &c).unwrap(), paneitz_boundary_on(a, &f).unwrap()),
            (flux_rho_inv_sq_on(&c).unwrap(), flux_rho_inv_sq_on(&f).unwrap()),
        ] {
            assert!(rel(x, y) < 1e-6);
        }
    }
}

#[test]
fn identities_sum_and_ratio_against_the_mass() {
    let a = 1.0;
    let m = pmass(&af_structure(&AFModel::new(a)), &DEFAULT_SCHEDULE).unwrap().value;
    let sum = boundary_i43(a).unwrap() + boundary_i44(a).unwrap();
    assert!(rel(sum, m / 6.0) < 1e-2);
    assert!(rel(paneitz_boundary(a).unwrap() / m, -4.0 / 3.0) < 1e-2);
}

#[test]
fn zero_radius_chart_is_rejected() {
    assert!(matches!(flux_rho_inv_sq_on(&SurfaceChart::new(0.0, 8, 8)), Err(Error::InvalidArgument(_))));
}

#[test]
fn box_b_zbar_leading_term() {
    let fit0 = box_b_zbar_expansion(&AFModel::new(0.0)).unwrap();
    assert!(fit0.per_radius.iter().all(|&(_, c, w)| c.abs() < 1e-12 && w < 1e-15));

    // magnitude of the leading shape at (rho, 0, 0): 4 pi rho^3 / rho^6
    let shape = 4.0 * PI * 10.0 * 100.0 / 1e6;
    assert!((shape - 4.0 * PI * 1e-3).abs() < 1e-15);

    let fit1 = box_b_zbar_expansion(&AFModel::new(1.0)).unwrap();
    assert!(rel(fit1.coefficient, 4.0 * PI) < 1e-2, "{fit1:?}");
    assert!(fit1.remainder_slope <= -3.7, "{fit1:?}");
    let fit2 = box_b_zbar_expansion(&AFModel::new(2.0)).unwrap();
    assert!(rel(fit2.coefficient, 8.0 * PI) < 1e-2, "{fit2:?}");
}

#[test]
fn box_b_zbar_pointwise_against_structure() {
    // independent of the fit: Box_b zbar - 4 pi A zbar w rho^-6 is small next to the leading term at rho = 40
    let st = af_structure(&AFModel::new(1.0));
    let zbar = ScalarField::closed_form("zbar", Domain::everywhere(), |c| c.zbar());
    let boxed = st.kohn_box(&zbar);
    let p = polar_point(40.0, 0.4, 1.0);
    let w = Complex64::new(p.r2(), p.t);
    let lead = 4.0 * PI * p.z().conj() * w / 40f64.powi(6);
    assert!((boxed.value(&p).unwrap() - lead).norm() < 0.02 * lead.norm());
}

#[test]
fn inversion_matches_model_end() {
    let r = blowup_inversion_check(1.0).unwrap();
    assert!(r.theta_rel[0] < 1e-2, "{r:?}");
    assert!(r.theta1_rel[0] < 1e-2, "{r:?}");
    assert!(r.omega_slope <= -3.7, "{r:?}");
    assert!(r.rotation_residual < 1e-10);
    assert!(r.dphi_residual < 1e-12);
    let flat = blowup_inversion_check(0.0).unwrap();
    assert!(flat.theta_rel.iter().chain(&flat.theta1_rel).all(|&g| g < 1e-12), "{flat:?}");
    assert!(flat.omega_gap.iter().all(|&g| g < 1e-12), "{flat:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn boundary_terms_are_linear_in_a(a in -2.0..2.0f64) {
        let unit = [boundary_i43(1.0).unwrap(), boundary_i44(1.0).unwrap(), paneitz_boundary(1.0).unwrap()];
        let got = [boundary_i43(a).unwrap(), boundary_i44(a).unwrap(), paneitz_boundary(a).unwrap()];
        for k in 0..3 {
            prop_assert!((got[k] - a * unit[k]).abs() < 1e-10 * unit[k].abs());
        }
    }
}
