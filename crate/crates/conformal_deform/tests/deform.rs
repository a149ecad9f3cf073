use conformal_deform::{
    conformal_change, cr_deformation, deform_first_order, delta_b_variations, finite_deformation, mass_first_variation,
    mass_variation_from_rdot, paneitz_qform_variations, DeformationField,
};
use heisenberg_core::quad::{shell_nodes, weighted_sum, ShellRule};
use heisenberg_core::sample::sample_points;
use heisenberg_core::{gauge_rho, Complex64, Coords, Domain, HPoint, Jet, ScalarField};
use ph_calculus::PHStructure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s2s1() -> PHStructure {
    let f = ScalarField::closed_form("-log rho", Domain::rho_positive(), |c| c.rho().ln().scale(-1.0));
    conformal_change(&PHStructure::flat(), &f)
}

fn smooth_e() -> DeformationField {
    DeformationField::new(ScalarField::closed_form("E", Domain::everywhere(), |c| {
        let amp = (&c.r2() + &(&c.t * &c.t)).scale(-0.1).exp();
        let poly = &(&c.x.scale(Complex64::i()) + &c.t.scale(0.3)).add_const(1.0) * &c.zbar().add_const(0.5);
        (&amp * &poly).scale(0.3)
    }))
}

fn annulus_bump(r0: f64, r1: f64, amp: Complex64, shift: f64) -> ScalarField {
    ScalarField::from_jet_fn("bump", Domain::everywhere(), move |p, k| {
        let c = Coords::new(p, k);
        let rho = gauge_rho(p);
        if rho <= r0 || rho >= r1 {
            return Ok(Jet::zero(k));
        }
        let s = (&c.rho().add_const(-r0) * &c.rho().scale(-1.0).add_const(r1)).recip();
        let shape = (&c.x.scale(shift) + &c.y.scale(0.5)).add_const(1.0);
        Ok((&s.scale(-1.0).exp() * &shape).scale(amp))
    })
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn zero_deformation_has_zero_variations() {
    let fv = deform_first_order(&s2s1(), &DeformationField::zero());
    let p = HPoint::new(0.4, -0.3, 0.8);
    assert_eq!(fv.a11.value(&p).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(fv.r.value(&p).unwrap(), Complex64::new(0.0, 0.0));
    for i in 0..3 {
        assert_eq!(fv.z1[i].value(&p).unwrap().norm(), 0.0);
    }
    let var = delta_b_variations(&s2s1(), &DeformationField::zero());
    let f = ScalarField::closed_form("f", Domain::everywhere(), |c| &c.x * &c.t);
    assert_eq!(var.first(&f).value(&p).unwrap().norm(), 0.0);
    assert_eq!(var.second(&f).value(&p).unwrap().norm(), 0.0);
}

#[test]
fn cr_deformation_does_not_change_curvature() {
    let r = deform_first_order(&PHStructure::flat(), &cr_deformation(4)).r;
    for p in sample_points(31, 30, 0.1, 10.0, 0.0) {
        assert!(r.value(&p).unwrap().norm() < 1e-12);
    }
}

#[test]
fn curvature_variation_of_zbar_squared_t() {
    // E = zbar^2 t: E,_{1bar 1bar} = t - 2i|z|^2, so R' = i(-2i - 2i) = 4 at (1, 0, 0)
    let e = DeformationField::new(ScalarField::closed_form("zbar^2 t", Domain::everywhere(), |c| {
        &(&c.zbar() * &c.zbar()) * &c.t
    }));
    let r = deform_first_order(&PHStructure::flat(), &e).r;
    let v = r.value(&HPoint::new(1.0, 0.0, 0.0)).unwrap();
    assert!((v - 4.0).norm() < 1e-13, "{v}");
    let e2 = DeformationField::new(ScalarField::closed_form("zbar^2", Domain::everywhere(), |c| &c.zbar() * &c.zbar()));
    let v2 = deform_first_order(&PHStructure::flat(), &e2).r.value(&HPoint::new(1.0, 0.0, 0.0)).unwrap();
    assert!(v2.norm() < 1e-13);
}

/// Central difference in `s` of a field of the deformed structure.
fn central<F>(st: &PHStructure, e: &DeformationField, h: f64, p: &HPoint, get: F) -> Complex64
where
    F: Fn(&PHStructure, &HPoint) -> Complex64,
{
    let plus = finite_deformation(st, e, h);
    let minus = finite_deformation(st, e, -h);
    (get(&plus, p) - get(&minus, p)) / (2.0 * h)
}

#[test]
fn first_order_variations_match_finite_differences() {
    let h = 1e-4;
    let e = smooth_e();
    for st in [PHStructure::flat(), s2s1()] {
        let fv = deform_first_order(&st, &e);
        for p in sample_points(32, 10, 0.6, 3.0, 0.0) {
            let da = central(&st, &e, h, &p, |s, q| s.torsion().value(q).unwrap());
            assert!(close(da, fv.a11.value(&p).unwrap(), 1e-6), "A' {p}: {da}");
            let dr = central(&st, &e, h, &p, |s, q| s.curvature().value(q).unwrap());
            assert!(close(dr, fv.r.value(&p).unwrap(), 1e-6), "R' {p}: {dr}");
            for i in 0..3 {
                let dz = central(&st, &e, h, &p, |s, q| s.dual_frame().z1[i].value(q).unwrap());
                assert!(close(dz, fv.z1[i].value(&p).unwrap(), 1e-6), "Z1' {p}");
                let dw = central(&st, &e, h, &p, |s, q| s.connection_torsion().0.real_jets(q, 0).unwrap()[i].value());
                let want = fv.omega.real_jets(&p, 0).unwrap()[i].value();
                assert!(close(dw, want, 1e-6), "omega' {p} [{i}]: {dw} vs {want}");
                let dt = central(&st, &e, h, &p, |s, q| s.coframe().jets(q, 0).unwrap().theta1[i].value());
                assert!(close(dt, fv.theta1.real_jets(&p, 0).unwrap()[i].value(), 1e-6));
            }
        }
    }
}

fn test_function() -> ScalarField {
    ScalarField::closed_form("f", Domain::everywhere(), |c| {
        &(&(&c.x * &c.t) + &(&c.r2() * &c.y).scale(0.5)) + &(&c.t * &c.t).scale(0.2)
    })
}

#[test]
fn sublaplacian_first_variation_matches_finite_differences() {
    let h = 1e-4;
    let e = smooth_e();
    let f = test_function();
    for st in [PHStructure::flat(), s2s1()] {
        let first = delta_b_variations(&st, &e).first(&f);
        for p in sample_points(33, 10, 0.6, 3.0, 0.0) {
            let d = central(&st, &e, h, &p, |s, q| s.sublaplacian(&f).value(q).unwrap());
            assert!(close(d, first.value(&p).unwrap(), 1e-6), "{p}: {d}");
        }
    }
}

#[test]
fn sublaplacian_first_variation_term_by_term_for_constant_e() {
    let c = Complex64::new(0.3, -0.7);
    let e = DeformationField::new(ScalarField::constant(c));
    let flat = PHStructure::flat();
    let first = delta_b_variations(&flat, &e).first(&ScalarField::closed_form("z zbar", Domain::everywhere(), |x| {
        &x.z() * &x.zbar()
    }));
    // Z1bar Z1bar (z zbar) = 0 and Z1 Z1 (z zbar) = 0
    assert!(first.value(&HPoint::new(0.3, 0.2, -1.0)).unwrap().norm() < 1e-14);
    // f = zbar^2: Z1bar Z1bar f = 1, so -Delta_b' f = 2i c
    let f = ScalarField::closed_form("zbar^2", Domain::everywhere(), |x| &x.zbar() * &x.zbar());
    let v = delta_b_variations(&flat, &e).first(&f).value(&HPoint::new(0.3, 0.2, -1.0)).unwrap();
    assert!((v + 2.0 * Complex64::i() * c).norm() < 1e-13, "{v}");
}

#[test]
fn sublaplacian_second_variation_for_constant_e() {
    let c = Complex64::new(0.3, -0.2);
    let e = DeformationField::new(ScalarField::constant(c));
    let flat = PHStructure::flat();
    let f = test_function();
    let second = delta_b_variations(&flat, &e).second(&f);
    let lap = heisenberg_core::flat_sublaplacian(&f);
    let h = 1e-3;
    for p in sample_points(34, 10, 0.5, 3.0, 0.0) {
        let v = second.value(&p).unwrap();
        let want = lap.value(&p).unwrap() * 4.0 * c.norm_sqr();
        assert!(close(v, want, 1e-12));
        let val = |s: f64| finite_deformation(&flat, &e, s).sublaplacian(&f).value(&p).unwrap();
        let fd = (val(h) - 2.0 * val(0.0) + val(-h)) / (h * h);
        assert!(close(fd, v, 1e-5), "{p}: {fd} vs {v}");
    }
}

/// `(P_(s) psi, psi)` over weighted nodes.
fn qform(st: &PHStructure, e: &DeformationField, s: f64, psi: &ScalarField, nodes: &[(HPoint, f64)]) -> f64 {
    let pst = finite_deformation(st, e, s);
    let ppsi = pst.paneitz(psi);
    weighted_sum(nodes, |p| Ok(psi.value(p)? * ppsi.value(p)?)).unwrap().re
}

#[test]
fn paneitz_form_variations_match_finite_differences() {
    let flat = PHStructure::flat();
    let e = DeformationField::new(annulus_bump(1.0, 2.0, Complex64::new(12.0, 5.0), 0.3));
    let nodes = shell_nodes(1.0, 2.0, &ShellRule { n_rho: 32, n_alpha: 32, n_phi: 32 }).unwrap();

    // general compactly supported psi: only the first-variation formula applies
    let psi = annulus_bump(1.0, 2.0, Complex64::new(1.0, 0.0), -0.8);
    let var = paneitz_qform_variations(&flat, &e, &psi, &nodes).unwrap();
    let h = 1e-3;
    let fd1 = (qform(&flat, &e, h, &psi, &nodes) - qform(&flat, &e, -h, &psi, &nodes)) / (2.0 * h);
    assert!((fd1 - var.first).abs() < 1e-5 * fd1.abs().max(1e-3), "{fd1} vs {}", var.first);

    // psi = x lies in the kernel of P and satisfies psi,_{1bar 1 1} = 0
    let x = ScalarField::closed_form("x", Domain::everywhere(), |c| c.x.clone());
    let var = paneitz_qform_variations(&flat, &e, &x, &nodes).unwrap();
    assert!(var.first.abs() < 1e-12);
    let h = 2e-2;
    let q0 = qform(&flat, &e, 0.0, &x, &nodes);
    let fd2 = |h: f64| (qform(&flat, &e, h, &x, &nodes) - 2.0 * q0 + qform(&flat, &e, -h, &x, &nodes)) / (h * h);
    let rich = (4.0 * fd2(h / 2.0) - fd2(h)) / 3.0;
    assert!((rich - var.second).abs() < 1e-4 * rich.abs(), "{rich} vs {}", var.second);
}

#[test]
fn mass_variation_of_cr_deformation() {
    let rule = ShellRule::default();
    let m = mass_first_variation(4, &rule).unwrap();
    assert!(m.value.re < 0.0);

    // Monte-Carlo oracle for int |E,_1|^2 theta0 ^ d theta0 with E = (t + i(|z|^2 + 1))^-k:
    // |E,_1|^2 = 2 k^2 |z|^2 |V|^{-2k-2}; with u = |z|^2 the volume is 4 pi du dt.
    // Sample t = (u+1) tan(pi (w - 1/2)) and u with density 2 (1+u)^-3.
    let k = 4i32;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 2_000_000;
    let mut acc = 0.0;
    for _ in 0..n {
        let u = (1.0 - rng.gen::<f64>()).powf(-0.5) - 1.0;
        let theta = std::f64::consts::PI * (rng.gen::<f64>() - 0.5);
        let kf = k as f64;
        acc += std::f64::consts::PI * kf * kf * u * (u + 1.0).powi(-2 * k + 2) * theta.cos().powi(2 * k);
    }
    let mc = 4.0 * std::f64::consts::PI * acc / n as f64;
    assert!((m.value.re + 1.5 * mc).abs() < 0.01 * 1.5 * mc, "{} vs {}", m.value.re, -1.5 * mc);
    assert!(mass_first_variation(2, &rule).is_err());
}

#[test]
fn mass_first_variation_vanishes_for_compact_deformations() {
    let e = DeformationField::new(annulus_bump(1.0, 2.0, Complex64::new(1.0, 2.0), 0.7));
    let rule = ShellRule { n_rho: 32, n_alpha: 32, n_phi: 32 };
    let m = mass_variation_from_rdot(&e, 1.0, 2.0, &rule).unwrap();
    let rdot = deform_first_order(&PHStructure::flat(), &e).r;
    let scale = heisenberg_core::quad::shell_integral(&|p: &HPoint| Ok(Complex64::from(rdot.value(p)?.norm())), 1.0, 2.0, &rule)
        .unwrap()
        .re;
    assert!(m.abs() < 1e-6 * scale, "{m} vs scale {scale}");
}
