use std::f64::consts::PI;

use heisenberg_core::quad::{polar_point, ShellRule};
use heisenberg_core::{dilate, gauge_rho, Coords, Domain, Error, HPoint, Jet, ScalarField};
use ph_calculus::PHStructure;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yamabe_quotient::*;

const DIRS: [(f64, f64); 6] = [(-1.3, 0.2), (-0.7, 1.9), (-0.1, 3.3), (0.4, 4.6), (0.9, 0.8), (1.4, 5.9)];

fn bump_value(x: f64, y: f64, t: f64) -> f64 {
    let r2 = x * x + y * y;
    let s = r2 * r2 + t * t;
    if s >= 1.0 {
        0.0
    } else {
        (1.0 + 0.5 * x + 0.3 * t) * (-1.0 / (1.0 - s)).exp()
    }
}

/// `(1 + x/2 + 3t/10) exp(-1/(1 - rho^4))` on the unit gauge ball.
fn bump() -> ScalarField {
    ScalarField::from_jet_fn("bump", Domain::everywhere(), |p, k| {
        if gauge_rho(p) >= 1.0 {
            return Ok(Jet::zero(k));
        }
        let c = Coords::new(p, k);
        let s = c.rho4().scale(-1.0).add_const(1.0);
        let poly = &(&c.x.scale(0.5) + &c.t.scale(0.3)).add_const(1.0);
        Ok(poly * &s.recip().scale(-1.0).exp())
    })
}

#[test]
fn eps0_makes_the_gluing_continuous() {
    let cfg = QuotientConfig::new(100.0, 1.0, 1.0);
    assert!((cfg.eps0() - 0.005).abs() < 1e-15);
    for c in [
        cfg.clone(),
        QuotientConfig::new(40.0, 0.5, 0.0),
        QuotientConfig::new(300.0, 0.2, 3.0).with_w_coeff(0.7),
    ] {
        let gap = continuity_gap(&c, &DIRS).unwrap();
        assert!(gap < 1e-10, "{c:?}: {gap}");
    }
}

#[test]
fn branches_of_the_test_function() {
    let cfg = QuotientConfig::new(50.0, 0.4, 2.0).with_w_coeff(0.3);
    for &(a, phi) in &DIRS {
        let p = polar_point(0.3, a, phi);
        let (u, w) = (test_function(&cfg, &p).unwrap(), bubble(50.0, &p));
        assert!((u - w).abs() < 1e-15 * w);
    }
    // no mass, no w: outside 2 rho0 the function is eps0 rho^-2
    let flat = QuotientConfig::new(50.0, 0.4, 0.0);
    for &(a, phi) in &DIRS {
        let p = polar_point(1.3, a, phi);
        let want = flat.eps0() / (1.3 * 1.3);
        assert!((test_function(&flat, &p).unwrap() - want).abs() < 1e-12 * want);
    }
}

#[test]
fn scale_conditions_are_enforced() {
    assert!(matches!(test_function(&QuotientConfig::new(9.0, 1.0, 1.0), &HPoint::ORIGIN), Err(Error::InvalidArgument(_))));
    assert!(matches!(QuotientConfig::new(100.0, 0.1, 1.0).validate_scan(), Err(Error::InvalidArgument(_))));
    assert!(QuotientConfig::new(100.0, 0.1, 1.0).validate().is_ok());
    assert!(matches!(deficit_scan(1.0, &[(1000.0, 1.0), (100.0, 0.1)]), Err(Error::InvalidArgument(_))));
}

#[test]
fn flat_quotient_of_the_bubble() {
    let cfg = QuotientConfig::new(1.0, 10.0, 0.0).with_rule(ShellRule { n_rho: 16, n_alpha: 32, n_phi: 4 });
    let q = quotient(&bubble_field(1.0), &PHStructure::flat(), &cfg).unwrap();
    let b = bubble_quotient(1.0, 1e4).unwrap();
    assert!((q.value - b.value).abs() < 1e-6 * b.value, "{q:?} vs {b:?}");
}

#[test]
fn gradient_quotient_matches_monte_carlo() {
    let cfg = QuotientConfig::new(10.0, 1.0, 0.0).with_rule(ShellRule { n_rho: 24, n_alpha: 32, n_phi: 16 });
    let q = quotient(&bump(), &PHStructure::flat(), &cfg).unwrap();

    // uniform samples of the box |x|, |y|, |t| <= 1 around the support;
    // |grad_b u|^2 = 2 |Z1 u|^2 with Z1 u from central differences; dW = 4 dx dy dt
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (n, h) = (400_000, 1e-5);
    let (mut grad, mut quart) = (0.0, 0.0);
    for _ in 0..n {
        let (x, y, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let u = bump_value(x, y, t);
        if u == 0.0 {
            continue;
        }
        let ux = (bump_value(x + h, y, t) - bump_value(x - h, y, t)) / (2.0 * h);
        let uy = (bump_value(x, y + h, t) - bump_value(x, y - h, t)) / (2.0 * h);
        let ut = (bump_value(x, y, t + h) - bump_value(x, y, t - h)) / (2.0 * h);
        // sqrt2 Z1 u = (u_x - i u_y)/2 + i zbar u_t, zbar = x - iy
        let re = 0.5 * ux + y * ut;
        let im = -0.5 * uy + x * ut;
        grad += re * re + im * im;
        quart += u.powi(4);
    }
    let vol = 8.0 * 4.0 / n as f64;
    let mc = grad * vol / (quart * vol).sqrt();
    assert!(((q.value - mc) / mc).abs() < 1e-2, "{} vs {mc}", q.value);
}

#[test]
fn positive_mass_lowers_the_quotient() {
    let y0 = bubble_quotient(1.0, 1e4).unwrap().value;
    for (lambda, rho0) in [(300.0, 1.0), (1000.0, 0.5)] {
        let g = glued_quotient(&PHStructure::flat(), &QuotientConfig::new(lambda, rho0, 1.0)).unwrap();
        assert!(g.value < y0, "{g:?}");
        assert!(g.deficit.value > 0.0);
    }
}

#[test]
fn green_energy_from_the_flux() {
    // oint 2 (1 + A rho^2) / rho^4 dphi ^ dt = 8 pi (1 + A rho0^2) / rho0^2
    for (a, rho0) in [(0.0, 1.0), (1.0, 1.0), (2.5, 0.3)] {
        let e = yamabe_quotient::quotient::green_flux_energy(a, 0.0, rho0).unwrap();
        let want = 8.0 * PI * (1.0 + a * rho0 * rho0) / (rho0 * rho0);
        assert!(((e - want) / want).abs() < 1e-10, "{e} vs {want}");
    }
}

#[test]
fn green_flux_is_the_exterior_energy_without_mass() {
    // with A = 0, G = rho^-2 decays and the exterior energy is a plain integral
    let rule = ShellRule { n_rho: 16, n_alpha: 32, n_phi: 4 };
    let g = ScalarField::closed_form("rho^-2", Domain::rho_positive(), |c| c.rho2().recip());
    let st = PHStructure::flat();
    let f = |p: &HPoint| {
        let d = yamabe_quotient::quotient::densities(&g, &st, &ScalarField::zero(), p)?;
        Ok(heisenberg_core::Complex64::new(d.gradient, 0.0))
    };
    let ext = yamabe_quotient::integrate::exterior(&f, 0.7, 50.0, &rule).unwrap().value;
    let flux = yamabe_quotient::quotient::green_flux_energy(0.0, 0.0, 0.7).unwrap();
    assert!(((ext - flux) / flux).abs() < 1e-6, "{ext} vs {flux}");
}

/// Boundary-term oracle: the ball contributes -8 pi/(lambda rho0)^2 and the
/// flux of eps0 G contributes 8 pi / (lambda^2 rho0^2 (1 + A rho0^2)).
fn deficit_law(a: f64, rho0: f64) -> f64 {
    8.0 * PI * a / (1.0 + a * rho0 * rho0)
}

#[test]
fn deficit_follows_the_boundary_term_law() {
    for (a, rho0) in [(1.0, 1.0), (1.0, 0.1), (0.5, 0.5)] {
        let s = deficit_scan(a, &[(1000.0, rho0)]).unwrap();
        let got = s.rows[0].deficit_scaled;
        let want = deficit_law(a, rho0) / a;
        assert!(((got - want) / want).abs() < 1e-2, "A={a} rho0={rho0}: {got} vs {want}");
    }
}

#[test]
fn deficit_at_unit_radius_is_half_the_small_radius_value() {
    // A rho0^2 = 1 halves the limit: 4 pi instead of 8 pi
    let s = deficit_scan(1.0, &[(1000.0, 1.0)]).unwrap();
    let v = s.rows[0].deficit_scaled;
    assert!((v - 4.0 * PI).abs() < 1e-3 * 4.0 * PI, "{v}");
    assert!(!(0.9 * 8.0 * PI..=1.1 * 8.0 * PI).contains(&v));
}

#[test]
fn deficit_vanishes_without_mass() {
    let s = deficit_scan(0.0, &[(300.0, 1.0), (1000.0, 0.5)]).unwrap();
    for r in &s.rows {
        assert!(r.deficit_scaled.abs() < 1e-3, "{r:?}");
    }
}

#[test]
fn deficit_trend_is_monotone() {
    let s = deficit_scan(1.0, &[(300.0, 1.0), (1000.0, 1.0), (3000.0, 1.0)]).unwrap();
    let v: Vec<f64> = s.rows.iter().map(|r| r.deficit_scaled).collect();
    let limit = deficit_law(1.0, 1.0);
    assert!((limit - v[0]).abs() > (limit - v[1]).abs() && (limit - v[1]).abs() > (limit - v[2]).abs(), "{v:?}");
    let fit = s.fitted_limit(false).unwrap();
    assert!((fit - limit).abs() < 1e-4 * limit, "{fit}");
    assert_eq!(s.fitted_limit(true).unwrap(), fit);
}

#[test]
fn scan_csv_layout() {
    let s = deficit_scan(1.0, &[(300.0, 1.0), (500.0, 0.5)]).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,rho0,Atilde,numerator,denominator,quotient,deficit_scaled,deficit_scaled_rho0");
    assert_eq!(lines.len(), 3);
    let cells: Vec<f64> = lines[2].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cells[0], 500.0);
    assert!((cells[7] - 0.25 * cells[6]).abs() < 1e-12 * cells[6]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn flat_quotient_is_dilation_invariant(mu in 0.5..2.0f64) {
        // the dilated function gets the dilated configuration, so its support
        // edge stays on a shell edge
        let rule = ShellRule { n_rho: 24, n_alpha: 32, n_phi: 16 };
        let cfg = QuotientConfig::new(20.0, 1.0, 0.0).with_rule(rule);
        let cfg_mu = QuotientConfig::new(20.0 * mu, 1.0 / mu, 0.0).with_rule(rule);
        let st = PHStructure::flat();
        let base = quotient(&bump(), &st, &cfg).unwrap().value;
        let u = bump();
        let scaled = ScalarField::from_jet_fn("bump o dilation", Domain::everywhere(), move |p, k| {
            let c = Coords::new(p, k);
            let map = [c.x.scale(mu), c.y.scale(mu), c.t.scale(mu * mu)];
            let q = dilate(mu, p)?;
            Ok(heisenberg_core::compose_jet(&u.jet(&q, k)?, &map))
        });
        let got = quotient(&scaled, &st, &cfg_mu).unwrap().value;
        prop_assert!(((got - base) / base).abs() < 1e-6, "{} vs {}", got, base);
    }
}
