use std::f64::consts::PI;

use heisenberg_core::quad::ShellRule;
use heisenberg_core::sample::sample_points;
use heisenberg_core::{dilate, Complex64, Error, HPoint};
use proptest::prelude::*;
use yamabe_quotient::integrate::ball;
use yamabe_quotient::*;

#[test]
fn value_at_origin_is_lambda() {
    for lambda in [0.5, 1.0, 5.0] {
        assert_eq!(bubble(lambda, &HPoint::ORIGIN), lambda);
        assert!((bubble_field(lambda).value(&HPoint::ORIGIN).unwrap() - lambda).norm() < 1e-15);
    }
}

#[test]
fn solves_the_yamabe_equation() {
    for (k, lambda) in [0.5f64, 1.0, 5.0].into_iter().enumerate() {
        let pts = sample_points(70 + k as u64, 200, 0.01 / lambda, 10.0 / lambda, 0.0);
        let res = bubble_pde_residual(lambda, &pts);
        assert!(res < 1e-8, "lambda {lambda}: {res}");
    }
}

#[test]
fn gradient_matches_the_explicit_expressions() {
    for lambda in [0.5, 2.0, 7.0] {
        for p in sample_points(71, 100, 0.01, 3.0, 0.0) {
            let (jet, closed) = (bubble_grad_sq_jet(lambda, &p), bubble_grad_sq(lambda, &p));
            assert!((jet - closed).abs() <= 1e-12 * closed.max(1e-300), "{jet} vs {closed}");
            let z1 = heisenberg_core::flat_z1(&bubble_field(lambda)).value(&p).unwrap();
            assert!((z1 - bubble_z1(lambda, &p)).norm() <= 1e-12 * z1.norm().max(1e-12));
        }
    }
}

#[test]
fn quotient_is_independent_of_lambda() {
    let one = bubble_quotient(1.0, 100.0).unwrap();
    let two = bubble_quotient(2.0, 50.0).unwrap();
    assert!((one.value - two.value).abs() < 1e-4 * one.value);
}

// int omega_1^4 dW = 4 int dx dy int dt (t^2 + a^2)^-2 with a = 1 + |z|^2;
// the t-integral is pi / (2 a^3), leaving 4 pi^2 int_0^inf r (1 + r^2)^-3 dr = pi^2.
// Both integrals agree (the PDE), so the quotient is pi.
#[test]
fn quotient_value_is_pi() {
    for lambda in [1.0, 3.0] {
        let q = bubble_quotient(lambda, 1e4 / lambda).unwrap();
        assert!((q.denominator.value - PI * PI).abs() < 1e-9, "{q:?}");
        assert!((q.numerator.value - PI * PI).abs() < 1e-8, "{q:?}");
        assert!((q.value - PI).abs() < 1e-8, "{q:?}");
        assert!(q.error < 1e-7);
    }
}

#[test]
fn numerator_and_denominator_agree_as_truncation_grows() {
    let gaps: Vec<f64> = [100.0, 1000.0, 10000.0]
        .iter()
        .map(|&t| {
            let q = bubble_quotient(1.0, t).unwrap();
            (q.numerator.value - q.denominator.value).abs()
        })
        .collect();
    assert!(gaps[2] < gaps[0] && gaps[2] < 1e-9, "{gaps:?}");
}

#[test]
fn quotient_arguments_are_checked() {
    assert!(matches!(bubble_quotient(0.0, 100.0), Err(Error::InvalidArgument(_))));
    assert!(matches!(bubble_quotient(2.0, 49.0), Err(Error::InvalidArgument(_))));
}

#[test]
fn boundary_term_equals_the_ball_defect() {
    let rule = ShellRule { n_rho: 16, n_alpha: 32, n_phi: 2 };
    for (lambda, rho0) in [(100.0, 1.0), (300.0, 0.25), (20.0, 1.0)] {
        let surface = bubble_boundary_term(lambda, rho0).unwrap();
        let f = |p: &HPoint| Ok(Complex64::new(bubble_grad_sq(lambda, p) - bubble(lambda, p).powi(4), 0.0));
        let volume = ball(&f, rho0, 1e-3 / lambda, &rule).unwrap().value;
        assert!(((surface - volume) / volume).abs() < 5e-3, "{lambda}, {rho0}: {surface} vs {volume}");
        // leading behaviour -8 pi / (lambda rho0)^2
        let lead = -8.0 * PI / (lambda * rho0).powi(2);
        assert!(((surface - lead) / lead).abs() < 3.0 / (lambda * rho0).powi(2) + 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bubbles_are_dilates_of_each_other(lambda in 0.2..8.0f64, x in -2.0..2.0f64, y in -2.0..2.0f64, t in -3.0..3.0f64) {
        let p = HPoint::new(x, y, t);
        let want = lambda * bubble(1.0, &dilate(lambda, &p).unwrap());
        prop_assert!((bubble(lambda, &p) - want).abs() <= 1e-13 * want);
    }
}
