use std::f64::consts::PI;

use asymptotic_mass::*;
use heisenberg_core::quad::polar_point;
use heisenberg_core::{Complex64, Domain, Error, HPoint, ScalarField};
use ph_calculus::Coframe;

const DIRS: [(f64, f64); 4] = [(-0.9, 0.4), (-0.2, 2.5), (0.5, 4.4), (1.2, 1.7)];

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let (a, b) = (xs.len() - 1, 0);
    (ys[a] / ys[b]).ln() / (xs[a] / xs[b]).ln()
}

#[test]
fn zero_mass_without_remainders_is_flat() {
    let cf = af_coframe(&AFModel::new(0.0));
    let flat = Coframe::flat();
    for p in heisenberg_core::sample::sample_points(41, 20, 1.5, 30.0, 0.0) {
        let (a, b) = (cf.jets(&p, 2).unwrap(), flat.jets(&p, 2).unwrap());
        for i in 0..3 {
            assert!((&a.theta[i] - &b.theta[i]).max_abs() < 1e-15);
            assert!((&a.theta1[i] - &b.theta1[i]).max_abs() < 1e-15);
        }
    }
}

#[test]
fn contact_coefficient_at_radius_ten() {
    let cf = af_coframe(&AFModel::new(1.0));
    for &(a, phi) in &DIRS {
        let p = polar_point(10.0, a, phi);
        let dt = cf.jets(&p, 0).unwrap().theta[2].value();
        assert!((dt - Complex64::new(1.0 + 4.0 * PI / 100.0, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn coframe_has_the_declared_orders() {
    // theta1 = -2 sqrt2 pi A z v rho^-6 theta0 + (1 + 2 pi A rho^-2 + O(rho^-4)) sqrt2 dz
    let a = 1.3;
    let cf = af_coframe(&AFModel::new(a));
    let th1 = cf.theta1();
    for &rho in &[20.0, 40.0] {
        for &(al, phi) in &DIRS {
            let p = polar_point(rho, al, phi);
            let dz = th1.dz.value(&p).unwrap();
            let dt = th1.dt.value(&p).unwrap();
            let v = Complex64::new(p.t, p.r2());
            let lead_dt = -2.0 * std::f64::consts::SQRT_2 * PI * a * p.z() * v / rho.powi(6);
            assert!((dt - lead_dt).norm() < 200.0 * rho.powi(-5), "{rho}: {dt} {lead_dt}");
            // the dz coefficient also absorbs the theta0 part: dz-coefficient of theta0 is -i zbar
            let lead_dz = std::f64::consts::SQRT_2 * (1.0 + 2.0 * PI * a / (rho * rho)) + lead_dt * (-Complex64::i() * p.z().conj());
            assert!((dz - lead_dz).norm() < 300.0 * rho.powi(-4), "{rho}: {dz} {lead_dz}");
        }
    }
}

#[test]
fn torsion_decays_like_rho_minus_four() {
    let st = af_structure(&AFModel::new(1.0));
    let a11 = st.torsion();
    let radii = [10.0, 20.0, 40.0];
    let maxes: Vec<f64> = radii
        .iter()
        .map(|&r| DIRS.iter().map(|&(a, f)| a11.value(&polar_point(r, a, f)).unwrap().norm()).fold(0.0, f64::max))
        .collect();
    let s = slope(&radii, &maxes);
    assert!((-4.3..=-3.7).contains(&s), "slope {s}");
}

#[test]
fn evaluation_inside_rho0_fails() {
    let cf = af_coframe(&AFModel::new(1.0).with_rho0(3.0));
    assert!(matches!(cf.jets(&HPoint::new(1.0, 0.0, 0.0), 0), Err(Error::OutOfDomain { .. })));
    let neg = AFModel::new(-2.0).with_rho0(1.0);
    assert!(matches!(af_coframe(&neg).jets(&HPoint::new(1.5, 0.0, 0.0), 0), Err(Error::Singular { .. })));
}

#[test]
fn closed_form_connection_values() {
    let zero = af_connection_closed_form(&AFModel::new(0.0));
    let p = HPoint::new(1.0, 0.0, 0.3);
    assert_eq!(zero.dz.value(&p).unwrap(), Complex64::new(0.0, 0.0));
    let one = af_connection_closed_form(&AFModel::new(1.0).with_rho0(0.5));
    let dz = one.dz.value(&HPoint::new(1.0, 0.0, 0.0)).unwrap();
    assert!((dz - Complex64::new(-6.0 * PI, 0.0)).norm() < 1e-13);
}

#[test]
fn structure_connection_approaches_closed_form() {
    let m = AFModel::new(1.0);
    let (omega, _) = af_structure(&m).connection_torsion();
    let closed = af_connection_closed_form(&m);
    let radii = [10.0, 20.0, 40.0];
    let gaps: Vec<f64> = radii
        .iter()
        .map(|&r| {
            DIRS.iter()
                .map(|&(a, f)| {
                    let p = polar_point(r, a, f);
                    let (x, y) = (omega.real_jets(&p, 0).unwrap(), closed.real_jets(&p, 0).unwrap());
                    (0..3).map(|i| (x[i].value() - y[i].value()).norm()).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    // the closed form itself is of size rho^-3 in the dx, dy coefficients
    assert!(gaps[1] < 100.0 * 20f64.powi(-4), "{gaps:?}");
    assert!(slope(&radii, &gaps) <= -3.7, "{gaps:?}");
}

#[test]
fn noise_remainders_keep_declared_orders() {
    let m = AFModel::new(0.0).with_noise(7, 1.0);
    let cf = af_coframe(&m);
    for &rho in &[20.0, 40.0] {
        for &(a, f) in &DIRS {
            let p = polar_point(rho, a, f);
            let j = cf.jets(&p, 0).unwrap();
            // theta - theta0 = h theta0 with h = O(rho^-3)
            assert!((j.theta[2].value() - 1.0).norm() < 5.0 * rho.powi(-3));
            // dzbar part of theta1 in the basis (theta0, dz, dzbar); theta0 carries i z dzbar
            let raw = (j.theta1[0].value() + Complex64::i() * j.theta1[1].value()) * 0.5;
            let dzbar = raw - j.theta1[2].value() * Complex64::i() * p.z();
            assert!(dzbar.norm() < 5.0 * rho.powi(-4), "{dzbar}");
        }
    }
}

#[test]
fn custom_remainders_are_used() {
    let h = ScalarField::closed_form("h", Domain::rho_positive(), |c| c.rho().powi(-3).scale(2.0));
    let m = AFModel::new(0.0).with_remainders(Some(h), None);
    let p = polar_point(10.0, 0.3, 0.1);
    let dt = af_coframe(&m).jets(&p, 0).unwrap().theta[2].value();
    assert!((dt.re - (1.0 + 2e-3)).abs() < 1e-14);
}
