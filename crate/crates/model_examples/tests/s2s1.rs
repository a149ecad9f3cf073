use std::f64::consts::{LN_2, TAU};

use heisenberg_core::quad::ShellRule;
use heisenberg_core::sample::sample_points;
use heisenberg_core::{Complex64, Coords, Domain, Error, HPoint, Jet, ScalarField};
use model_examples::*;
use ph_calculus::residual_report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RULE: ShellRule = ShellRule { n_rho: 8, n_alpha: 16, n_phi: 16 };

#[test]
fn torsion_from_the_structure_equations() {
    let a = s2s1_structure().torsion();
    for p in sample_points(10, 100, 0.5, 20.0, 0.0) {
        assert!((a.value(&p).unwrap() - s2s1_torsion(&p)).norm() < 1e-9);
    }
    // at (1, 0): the derived torsion is i/2, the reference formula gives i
    let p = HPoint::new(1.0, 0.0, 0.0);
    assert!((a.value(&p).unwrap() - Complex64::new(0.0, 0.5)).norm() < 1e-12);
    assert!((s2s1_torsion_reference(&p) - Complex64::i()).norm() < 1e-15);
    assert!(a.value(&p).unwrap().norm() > 0.0);
}

#[test]
fn derived_fields_are_dilation_invariant() {
    let st = s2s1_structure();
    let fields = [st.curvature(), st.torsion(), st.cartan_tensor()];
    let pts = sample_points(11, 50, 0.5, 8.0, 0.0);
    assert!(periodicity_residual(&fields, &pts).unwrap() < 1e-9);
    assert_eq!(dyadic(&HPoint::new(1.0, -2.0, 3.0)), HPoint::new(2.0, -4.0, 12.0));
}

#[test]
fn residual_suite_passes() {
    let st = s2s1_structure();
    let rep = residual_report(&st, &sample_points(12, 200, 0.5, 50.0, 0.0), &[(st.torsion(), 2)]).unwrap();
    assert!(rep.worst() < 1e-8, "{rep:?}");
}

fn log2_rho(c: &Coords) -> Jet {
    c.rho().ln().scale(1.0 / LN_2)
}

#[test]
fn constants_have_zero_paneitz_form() {
    // P 1 = 0 on the quotient; the cut-off values are all boundary and decay like 1/n
    let s = s2s1_paneitz_sampling(&ScalarField::constant(1.5), 2, &RULE).unwrap();
    assert!(s.period.abs() < 1e-10, "{s:?}");
    assert!((2.0 * s.values[1] - s.values[0]).abs() < 1e-8 * s.values[0].abs(), "{s:?}");
    assert!(s.norm_sq > 0.0);
}

#[test]
fn each_extra_period_adds_the_quotient_value() {
    let phi = ScalarField::closed_form("sin", Domain::rho_positive(), |c| log2_rho(c).scale(TAU).sin());
    let s = s2s1_paneitz_sampling(&phi, 3, &RULE).unwrap();
    // v_n = period + boundary / n: consecutive values differ by less than the boundary budget
    assert!(s.increment_defect() < 1e-6 * s.period.abs(), "{s:?}");
    for (k, v) in s.values.iter().enumerate() {
        let n = (k + 1) as f64;
        assert!((n * (v - s.period) - s.boundary).abs() < 1e-6 * s.boundary.abs());
        assert!(*v >= -s.boundary.abs() / n);
    }
    for w in s.values.windows(2) {
        assert!((w[0] - w[1]).abs() < s.boundary.abs());
    }
}

#[test]
fn quotient_value_is_converged() {
    let phi = ScalarField::closed_form("sin", Domain::rho_positive(), |c| log2_rho(c).scale(TAU).sin());
    let (a, _) = s2s1_paneitz_period(&phi, &RULE).unwrap();
    let (b, _) = s2s1_paneitz_period(&phi, &ShellRule { n_rho: 12, n_alpha: 24, n_phi: 16 }).unwrap();
    assert!((a - b).abs() < 1e-6 * b.abs(), "{a} {b}");
}

#[test]
fn non_periodic_input_is_rejected() {
    let phi = ScalarField::closed_form("x", Domain::everywhere(), |c| c.x.clone());
    assert!(matches!(s2s1_paneitz_sampling(&phi, 1, &RULE), Err(Error::InvalidArgument(_))));
}

/// Random combination of the dilation-invariant functions
/// `x/rho, y/rho, t/rho^2` (up to degree two) times `1, cos, sin` of `2 pi log2 rho`.
fn random_periodic(seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: [f64; 30] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    ScalarField::closed_form("random periodic", Domain::rho_positive(), move |x| {
        let inv = x.rho().recip();
        let (u, v, w) = (&x.x * &inv, &x.y * &inv, &x.t * &inv.powi(2));
        let one = x.constant(1.0);
        let angular = [one, u.clone(), v.clone(), w.clone(), &u * &u, &u * &v, &u * &w, &v * &w, &w * &w, &v * &v];
        let s = log2_rho(x).scale(TAU);
        let radial = [x.constant(1.0), s.cos(), s.sin()];
        let mut acc = x.constant(0.0);
        for (i, a) in angular.iter().enumerate() {
            for (j, r) in radial.iter().enumerate() {
                acc += &(a * r).scale(c[3 * i + j]);
            }
        }
        acc
    })
}

#[test]
fn sampled_paneitz_form_is_nonnegative() {
    for seed in 0..20 {
        let (period, norm_sq) = s2s1_paneitz_period(&random_periodic(seed), &RULE).unwrap();
        assert!(period >= -1e-3 * norm_sq, "seed {seed}: {period} vs |phi|^2 {norm_sq}");
    }
}
