//! The numerical checks behind every command, grouped by topic. Tolerances
//! are the pinned acceptance values in [`tol`]; commands may override them.

use std::f64::consts::{PI, SQRT_2};

use asymptotic_mass::{
    af_structure, boundary_i43, boundary_i44, box_b_zbar_expansion, flux_rho_inv_sq_on, paneitz_boundary, pmass_with, AFModel,
    SurfaceChart, DEFAULT_SCHEDULE,
};
use conformal_deform::{
    check_lb_covariance, check_paneitz_covariance, deform_first_order, mass_first_variation,
    mass_variation_from_rdot, DeformationField,
};
use heisenberg_core::quad::{shell_integral, ShellRule};
use heisenberg_core::sample::sample_points;
use heisenberg_core::{flat_kohn_box, flat_z1bar, gauge_rho, Complex64, Coords, Domain, HPoint, Jet, Result, ScalarField};
use kohn_szego::{g_hat_field, g_tilde_field, source_field, szego_decay, QuadConfig};
use model_examples::{example, s2s1_structure, s2s1_torsion, s2s1_torsion_reference, sphere_paneitz_variations, EXAMPLE_NAMES};
use ph_calculus::{residual_report_at, PHStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yamabe_quotient::{bubble_pde_residual, bubble_quotient, deficit_scan, DeficitScan};

use crate::check::{Check, Comparison, Provenance};

/// Pinned acceptance tolerances.
pub mod tol {
    pub const MASS_REL: f64 = 1e-3;
    /// `A = 0` has no scale to be relative to.
    pub const MASS_ZERO_ABS: f64 = 1e-8;
    pub const MASS_SECONDS: f64 = 30.0;
    pub const FLUX_ABS: f64 = 1e-6;
    pub const FLUX_SECONDS: f64 = 1.0;
    pub const IDENTITY_REL: f64 = 5e-3;
    pub const IDENTITY_SUM_REL: f64 = 1e-2;
    pub const PANEITZ_BOUNDARY_REL: f64 = 5e-3;
    pub const PANEITZ_RATIO_REL: f64 = 1e-2;
    pub const BUBBLE_RESIDUAL: f64 = 1e-8;
    pub const STRUCTURE_RESIDUAL: f64 = 1e-8;
    pub const COVARIANCE_RESIDUAL: f64 = 1e-6;
    pub const TORSION_ABS: f64 = 1e-9;
    pub const DECAY_SLOPE: (f64, f64) = (-4.5, -3.5);
    pub const DECAY_SECONDS: f64 = 300.0;
    pub const SPURIOUS_RESIDUAL: f64 = 1e-8;
    /// Jet derivative against the closed form, relative.
    pub const GTILDE_REL: f64 = 1e-9;
    pub const MASS_VARIATION_REL: f64 = 1e-2;
    /// Compactly supported deformation: `|m'|` relative to `int |R'|`.
    pub const NULL_VARIATION_REL: f64 = 1e-6;
    /// `|first variation| / |second variation|`
    pub const FIRST_VARIATION_REL: f64 = 1e-6;
    pub const DEFICIT_REL: f64 = 0.1;
    pub const BOX_FIT_REL: f64 = 1e-2;
    pub const REMAINDER_SLOPE: f64 = -3.7;
}

const PI2: f64 = PI * PI;

/// `m = 48 pi^2 A` on the model end.
pub fn mass_checks(a: f64, schedule: &[f64], grid: (usize, usize)) -> Vec<Check> {
    let (cmp, prov) = if a == 0.0 {
        (Comparison::Absolute { reference: 0.0, tolerance: tol::MASS_ZERO_ABS }, Provenance::Exact)
    } else {
        (Comparison::Relative { reference: 48.0 * PI2 * a, tolerance: tol::MASS_REL }, Provenance::Published)
    };
    vec![Check::attempt(format!("p-mass A={a}"), cmp, prov, || {
        Ok(pmass_with(&af_structure(&AFModel::new(a)), schedule, grid.0, grid.1)?.value)
    })]
}

/// `oint rho^-2 flux = -8 pi` on the gauge sphere of the given radius.
pub fn flux_checks(radius: f64, grid: (usize, usize)) -> Vec<Check> {
    let cmp = Comparison::Absolute { reference: -8.0 * PI, tolerance: tol::FLUX_ABS };
    vec![Check::attempt(format!("flux of rho^-2 on rho={radius}"), cmp, Provenance::Published, || {
        flux_rho_inv_sq_on(&SurfaceChart::new(radius, grid.0, grid.1))
    })]
}

/// `I43 = 28 pi^2 A`, `I44 = -20 pi^2 A`, `I43 + I44 = m/6`, Paneitz boundary
/// term `-64 pi^2 A` and its ratio `-4/3` to the mass.
pub fn identity_checks(a: f64) -> Vec<Check> {
    let mass = pmass_with(&af_structure(&AFModel::new(a)), &DEFAULT_SCHEDULE, 32, 32).map(|m| m.value);
    let (i43, i44, pb) = (boundary_i43(a), boundary_i44(a), paneitz_boundary(a));
    let rel = |reference, tolerance| Comparison::Relative { reference, tolerance };
    let pub_ = Provenance::Published;
    let mut out = vec![
        Check::attempt(format!("I43 A={a}"), rel(28.0 * PI2 * a, tol::IDENTITY_REL), pub_, || i43.clone()),
        Check::attempt(format!("I44 A={a}"), rel(-20.0 * PI2 * a, tol::IDENTITY_REL), pub_, || i44.clone()),
    ];
    let sum_ref = mass.as_ref().map(|m| m / 6.0).unwrap_or(f64::NAN);
    out.push(Check::attempt(format!("I43 + I44 against m/6, A={a}"), rel(sum_ref, tol::IDENTITY_SUM_REL), Provenance::Derived, || {
        mass.clone()?;
        Ok(i43.clone()? + i44.clone()?)
    }));
    out.push(Check::attempt(format!("Paneitz boundary term A={a}"), rel(-64.0 * PI2 * a, tol::PANEITZ_BOUNDARY_REL), pub_, || {
        pb.clone()
    }));
    out.push(Check::attempt(format!("Paneitz boundary / p-mass, A={a}"), rel(-4.0 / 3.0, tol::PANEITZ_RATIO_REL), pub_, || {
        Ok(pb.clone()? / mass.clone()?)
    }));
    out
}

/// `max |-Delta_b omega - omega^3|` over 1000 seeded points per `lambda`,
/// gauge log-uniform in `[0.01, 10] / lambda`.
pub fn bubble_checks(lambdas: &[f64], seed: u64) -> Vec<Check> {
    lambdas
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let pts = sample_points(seed.wrapping_add(k as u64), 1000, 0.01 / lambda, 10.0 / lambda, 0.0);
            let res = bubble_pde_residual(lambda, &pts);
            Check::below(format!("bubble equation residual lambda={lambda}"), res, tol::BUBBLE_RESIDUAL, Provenance::Published)
        })
        .collect()
}

/// Smooth complex test tensor for the commutation relations.
fn commutation_tensor() -> ScalarField {
    ScalarField::closed_form("c", Domain::everywhere(), |c: &Coords| {
        let lin = &(&c.x.scale(0.3) - &c.y.scale(0.2)) + &c.t.scale(0.1);
        (&lin.exp() * &c.z().add_const(Complex64::new(0.5, -1.0))).scale(0.5)
    })
}

/// Structure-equation, reality and commutation residuals on every registered
/// example at 200 points.
pub fn structure_checks(seed: u64, jet_order: usize) -> Vec<Check> {
    let tensor = commutation_tensor();
    EXAMPLE_NAMES
        .iter()
        .map(|&name| {
            let cmp = Comparison::Below { bound: tol::STRUCTURE_RESIDUAL };
            Check::attempt(format!("residual suite on {name}"), cmp, Provenance::Exact, || {
                let ex = example(name)?;
                let st = &ex.structure;
                let tensors = [(tensor.clone(), 0), (tensor.clone(), 1), (st.torsion(), 2)];
                Ok(residual_report_at(st, &ex.sample(seed, 200), &tensors, jet_order)?.worst())
            })
        })
        .collect()
}

/// Real smooth conformal factor with random coefficients in `[-1, 1]`.
fn random_factor(rng: &mut ChaCha8Rng) -> ScalarField {
    let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    ScalarField::closed_form("f", Domain::everywhere(), move |x| {
        let lin = &(&x.x.scale(c[0]) + &x.y.scale(c[1])) + &x.t.scale(c[2]);
        let quad = (&(&x.x * &x.t) + &x.r2().scale(c[3])).scale(0.1);
        &lin.scale(0.2) + &quad
    })
}

/// Real polynomial test function with random coefficients.
fn random_poly(rng: &mut ChaCha8Rng) -> ScalarField {
    let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    ScalarField::closed_form("phi", Domain::everywhere(), move |x| {
        let a = &(&x.x * &x.x).scale(c[0]) + &(&x.y * &x.t).scale(c[1]);
        &(&a + &(&x.r2() * &x.t).scale(c[2])) + &x.x
    })
}

/// Worst `L_b` and Paneitz covariance residuals over random `(f, phi)`
/// pairs on the flat and the `rho^-2 theta0` base.
pub fn covariance_checks(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(ScalarField, ScalarField)> = (0..4).map(|_| (random_factor(&mut rng), random_poly(&mut rng))).collect();
    let pts = sample_points(seed, 6, 0.5, 3.0, 0.0);
    let mut out = Vec::new();
    for (label, base) in [("flat", PHStructure::flat()), ("rho^-2 theta0", s2s1_structure())] {
        let worst = |check: fn(&PHStructure, &ScalarField, &ScalarField, &[HPoint]) -> Result<f64>| -> Result<f64> {
            pairs.iter().try_fold(0.0f64, |w, (f, phi)| Ok(w.max(check(&base, f, phi, &pts)?)))
        };
        let cmp = Comparison::Below { bound: tol::COVARIANCE_RESIDUAL };
        out.push(Check::attempt(format!("L_b covariance on {label}"), cmp, Provenance::Exact, || worst(check_lb_covariance)));
        out.push(Check::attempt(format!("Paneitz covariance on {label}"), cmp, Provenance::Exact, || {
            worst(check_paneitz_covariance)
        }));
    }
    out
}

/// Torsion of `rho^-2 theta0` at 100 points against the displayed closed
/// form, and against the form the structure equations give.
pub fn torsion_checks(seed: u64) -> Vec<Check> {
    let pts = sample_points(seed, 100, 0.5, 20.0, 0.0);
    let a = s2s1_structure().torsion();
    let worst = |reference: fn(&HPoint) -> Complex64| -> Result<f64> {
        pts.iter().try_fold(0.0f64, |w, p| Ok(w.max((a.value(p)? - reference(p)).norm())))
    };
    let cmp = Comparison::Absolute { reference: 0.0, tolerance: tol::TORSION_ABS };
    vec![
        Check::attempt("torsion against i|z|^2 (|z|^2+it)^2 rho^-6", cmp, Provenance::Published, || {
            worst(s2s1_torsion_reference)
        }),
        Check::attempt("torsion against (i/2) zbar^2 (|z|^2+it)^2 rho^-6", cmp, Provenance::Derived, || worst(s2s1_torsion)),
    ]
}

/// Log-log decay slope of `|S(chi f)|` over the given radii.
pub fn decay_checks(a: f64, radii: &[f64]) -> Vec<Check> {
    let (lo, hi) = tol::DECAY_SLOPE;
    vec![Check::attempt(format!("Szego decay slope A={a}"), Comparison::Within { lo, hi }, Provenance::Published, || {
        Ok(szego_decay(a, radii, &QuadConfig::default())?.slope)
    })]
}

/// `Box_b g + f = 0` for both spurious solutions away from their cuts, and
/// `g~,_1bar = -2 sqrt2 pi A / rho^2` from jets.
pub fn spurious_checks(a: f64, seed: u64) -> Vec<Check> {
    let pts = sample_points(seed, 200, 0.3, 5.0, 0.0);
    let f = source_field(a);
    let residual = |g: ScalarField, keep: fn(&HPoint) -> bool| -> Result<f64> {
        let boxed = flat_kohn_box(&g);
        pts.iter().filter(|p| keep(p)).try_fold(0.0f64, |w, p| Ok(w.max((boxed.value(p)? + f.value(p)?).norm())))
    };
    let cmp = Comparison::Below { bound: tol::SPURIOUS_RESIDUAL };
    let prov = Provenance::Published;
    let gt = g_tilde_field(a);
    vec![
        Check::attempt(format!("Box_b g~ + f, z != 0, A={a}"), cmp, prov, || residual(gt.clone(), |p| p.r2() > 1e-6)),
        Check::attempt(format!("Box_b g^ + f, t != 0, A={a}"), cmp, prov, || residual(g_hat_field(a), |p| p.t.abs() > 1e-6)),
        Check::attempt(
            format!("g~,1bar against -2 sqrt2 pi A rho^-2, A={a}"),
            Comparison::Below { bound: tol::GTILDE_REL },
            prov,
            || {
                let d = flat_z1bar(&gt);
                pts.iter().filter(|p| p.r2() > 1e-6).try_fold(0.0f64, |w, p| {
                    let want = -2.0 * SQRT_2 * PI * a / gauge_rho(p).powi(2);
                    Ok(w.max((d.value(p)? - want).norm() / want.abs().max(1.0)))
                })
            },
        ),
    ]
}

/// `int |E_11,_1|^2 theta0 ^ d theta0` for `E_11 = (t + i(|z|^2 + 1))^-4`
/// by Monte Carlo: with `u = |z|^2` the volume is `4 pi du dt`; sample
/// `t = (u + 1) tan(pi (w - 1/2))` and `u` with density `2 (1 + u)^-3`.
pub fn mass_integral_monte_carlo(seed: u64, samples: usize) -> f64 {
    let k = 4;
    let kf = k as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let u = (1.0 - rng.gen::<f64>()).powf(-0.5) - 1.0;
        let theta = PI * (rng.gen::<f64>() - 0.5);
        acc += PI * kf * kf * u * (u + 1.0).powi(-2 * k + 2) * theta.cos().powi(2 * k);
    }
    4.0 * PI * acc / samples as f64
}

/// Compactly supported deformation on the annulus `1 < rho < 2`.
fn annulus_deformation() -> DeformationField {
    DeformationField::new(ScalarField::from_jet_fn("bump", Domain::everywhere(), |p, k| {
        let rho = gauge_rho(p);
        if rho <= 1.0 || rho >= 2.0 {
            return Ok(Jet::zero(k));
        }
        let c = Coords::new(p, k);
        let s = (&c.rho().add_const(-1.0) * &c.rho().scale(-1.0).add_const(2.0)).recip();
        let shape = (&c.x.scale(0.7) + &c.y.scale(0.5)).add_const(1.0);
        Ok((&s.scale(-1.0).exp() * &shape).scale(Complex64::new(1.0, 2.0)))
    }))
}

/// Sign of the mass variation for the CR deformation, its value against
/// `-(3/2)` times a Monte Carlo integral, and the null test for a
/// compactly supported deformation.
pub fn mass_variation_checks(seed: u64, rule: &ShellRule) -> Vec<Check> {
    let m = mass_first_variation(4, rule).map(|e| e.value.re);
    let mc = mass_integral_monte_carlo(seed, 2_000_000);
    let null_rule = ShellRule { n_rho: 32, n_alpha: 32, n_phi: 32 };
    vec![
        Check::attempt("mass first variation sign", Comparison::Below { bound: 0.0 }, Provenance::Published, || m.clone()),
        Check::attempt(
            "mass first variation against -(3/2) Monte Carlo",
            Comparison::Relative { reference: -1.5 * mc, tolerance: tol::MASS_VARIATION_REL },
            Provenance::Derived,
            || m.clone(),
        ),
        Check::attempt(
            "mass variation of a compact deformation",
            Comparison::Below { bound: tol::NULL_VARIATION_REL },
            Provenance::Published,
            || {
                let e = annulus_deformation();
                let v = mass_variation_from_rdot(&e, 1.0, 2.0, &null_rule)?;
                let rdot = deform_first_order(&PHStructure::flat(), &e).r;
                let scale = shell_integral(&|p: &HPoint| Ok(Complex64::from(rdot.value(p)?.norm())), 1.0, 2.0, &null_rule)?.re;
                Ok(v.abs() / scale)
            },
        ),
    ]
}

/// Variations of `(P_(s) psi, psi)` on the sphere for `psi = z1 + zbar1`, `E_11 = 1`.
pub fn sphere_variation_checks(rule: &ShellRule, levels: i32) -> Vec<Check> {
    let v = sphere_paneitz_variations(rule, levels);
    vec![
        Check::attempt("sphere second variation sign", Comparison::Below { bound: 0.0 }, Provenance::Published, || {
            Ok(v.clone()?.second)
        }),
        Check::attempt(
            "sphere first variation / |second|",
            Comparison::Below { bound: tol::FIRST_VARIATION_REL },
            Provenance::Published,
            || {
                let v = v.clone()?;
                Ok(v.first.abs() / v.second.abs())
            },
        ),
    ]
}

/// Scaled deficit at the largest `lambda` against `8 pi`, and the quotient
/// below the bubble quotient at every grid point.
pub fn deficit_checks(a_tilde: f64, grid: &[(f64, f64)]) -> (Vec<Check>, Option<DeficitScan>) {
    let scan = match deficit_scan(a_tilde, grid) {
        Ok(s) => s,
        Err(e) => {
            let cmp = Comparison::Relative { reference: 8.0 * PI, tolerance: tol::DEFICIT_REL };
            return (vec![Check::attempt("deficit scan", cmp, Provenance::Published, || Err(e))], None);
        }
    };
    let mut out = Vec::new();
    if let Some(last) = scan.rows.iter().max_by(|x, y| x.lambda.total_cmp(&y.lambda)) {
        out.push(Check::relative(
            format!("scaled deficit lambda={} rho0={}", last.lambda, last.rho0),
            last.deficit_scaled,
            8.0 * PI,
            tol::DEFICIT_REL,
            Provenance::Published,
        ));
    }
    let y0 = bubble_quotient(1.0, 1e4).map(|b| b.value);
    for r in &scan.rows {
        let bound = *y0.as_ref().unwrap_or(&f64::NAN);
        out.push(Check::attempt(
            format!("quotient below bubble quotient lambda={} rho0={}", r.lambda, r.rho0),
            Comparison::Below { bound },
            Provenance::Derived,
            || y0.clone().map(|_| r.quotient),
        ));
    }
    (out, Some(scan))
}

/// Coefficient `4 pi A` of the leading term of `Box_b zbar` and the decay of
/// the remainder.
pub fn box_fit_checks(a: f64) -> Vec<Check> {
    let fit = box_b_zbar_expansion(&AFModel::new(a));
    vec![
        Check::attempt(
            format!("Box_b zbar coefficient A={a}"),
            Comparison::Relative { reference: 4.0 * PI * a, tolerance: tol::BOX_FIT_REL },
            Provenance::Published,
            || Ok(fit.clone()?.coefficient),
        ),
        Check::attempt(
            format!("Box_b zbar remainder slope A={a}"),
            Comparison::AtMost { bound: tol::REMAINDER_SLOPE },
            Provenance::Published,
            || Ok(fit.clone()?.remainder_slope),
        ),
    ]
}
