//! The standard bubble `omega_lambda` of the Heisenberg group.

use std::f64::consts::FRAC_1_SQRT_2;

use asymptotic_mass::phi_t_integral;
use heisenberg_core::flat::{sublaplacian_jet, z1_jet};
use heisenberg_core::quad::{ShellRule, SurfaceChart};
use heisenberg_core::{Complex64, Coords, Domain, Error, HPoint, Jet, Result, ScalarField};

use crate::integrate::{whole, Value};

/// `lambda [lambda^4 t^2 + (1 + lambda^2 |z|^2)^2]^{-1/2}`
pub fn bubble(lambda: f64, p: &HPoint) -> f64 {
    let l2 = lambda * lambda;
    let s = 1.0 + l2 * p.r2();
    lambda / (l2 * l2 * p.t * p.t + s * s).sqrt()
}

pub fn bubble_jet(lambda: f64, c: &Coords) -> Jet {
    let l2 = lambda * lambda;
    let s = c.r2().scale(l2).add_const(1.0);
    let q = &(&c.t * &c.t).scale(l2 * l2) + &(&s * &s);
    q.powf(-0.5).scale(lambda)
}

pub fn bubble_field(lambda: f64) -> ScalarField {
    ScalarField::closed_form(&format!("omega_{lambda}"), Domain::everywhere(), move |c| bubble_jet(lambda, c))
}

/// `2 (Z1 omega)(Z1bar omega) = |z|^2 lambda^6 / ((1 + lambda^2 |z|^2)^2 + lambda^4 t^2)^2`
pub fn bubble_grad_sq(lambda: f64, p: &HPoint) -> f64 {
    let l2 = lambda * lambda;
    let s = 1.0 + l2 * p.r2();
    let q = s * s + l2 * l2 * p.t * p.t;
    p.r2() * l2 * l2 * l2 / (q * q)
}

/// `2 |Z1 omega|^2` from jets of the bubble.
pub fn bubble_grad_sq_jet(lambda: f64, p: &HPoint) -> f64 {
    let w = bubble_jet(lambda, &Coords::new(p, 1));
    2.0 * z1_jet(p, &w).value().norm_sqr()
}

/// `Z1 omega = -(1/sqrt 2) zbar (1 + lambda^2 |z|^2 + i t lambda^2) lambda^3 / q^{3/2}`
pub fn bubble_z1(lambda: f64, p: &HPoint) -> Complex64 {
    let l2 = lambda * lambda;
    let s = 1.0 + l2 * p.r2();
    let q = s * s + l2 * l2 * p.t * p.t;
    -FRAC_1_SQRT_2 * p.z().conj() * Complex64::new(s, p.t * l2) * (l2 * lambda) / q.powf(1.5)
}

/// Largest `|-Delta_b omega - omega^3|` over `points`.
pub fn bubble_pde_residual(lambda: f64, points: &[HPoint]) -> f64 {
    points
        .iter()
        .map(|p| {
            let w = bubble_jet(lambda, &Coords::new(p, 2));
            let lhs = -sublaplacian_jet(p, &w).value();
            (lhs - w.value().powi(3)).norm()
        })
        .fold(0.0, f64::max)
}

/// `int |grad omega|^2`, `int omega^4` and their quotient over the whole group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BubbleQuotient {
    pub numerator: Value,
    pub denominator: Value,
    pub value: f64,
    pub error: f64,
}

pub fn quotient_parts(numerator: Value, denominator: Value) -> (f64, f64) {
    let value = numerator.value / denominator.value.sqrt();
    let rel = numerator.error / numerator.value.abs() + 0.5 * denominator.error / denominator.value.abs();
    (value, value.abs() * rel)
}

/// Shell resolution used for the bubble; the integrands do not depend on
/// the angle of `z`.
pub const BUBBLE_RULE: ShellRule = ShellRule { n_rho: 16, n_alpha: 32, n_phi: 2 };

/// The flat quotient of `omega_lambda`; shells are resolved out to
/// `truncation` and extrapolated beyond it.
pub fn bubble_quotient(lambda: f64, truncation: f64) -> Result<BubbleQuotient> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    if !(truncation * lambda >= 100.0) {
        return Err(Error::InvalidArgument(format!("truncation {truncation} is below 100/lambda")));
    }
    let scale = 1.0 / lambda;
    let grad = |p: &HPoint| Ok(Complex64::new(bubble_grad_sq(lambda, p), 0.0));
    let quartic = |p: &HPoint| Ok(Complex64::new(bubble(lambda, p).powi(4), 0.0));
    let numerator = whole(&grad, scale, 1e-3 * scale, truncation, &BUBBLE_RULE)?;
    let denominator = whole(&quartic, scale, 1e-3 * scale, truncation, &BUBBLE_RULE)?;
    let (value, error) = quotient_parts(numerator, denominator);
    Ok(BubbleQuotient { numerator, denominator, value, error })
}

/// `-2 oint_{rho = rho0} lambda^4 (|z|^2 + lambda^2 rho^4) / q^2 dphi ^ dt`,
/// which equals `int_{rho <= rho0} (|grad omega|^2 - omega^4)`.
pub fn bubble_boundary_term(lambda: f64, rho0: f64) -> Result<f64> {
    let l2 = lambda * lambda;
    phi_t_integral(&SurfaceChart::new(rho0, 64, 128), |p| {
        let s = 1.0 + l2 * p.r2();
        let q = l2 * l2 * p.t * p.t + s * s;
        let rho4 = p.r2() * p.r2() + p.t * p.t;
        -2.0 * l2 * l2 * (p.r2() + l2 * rho4) / (q * q)
    })
}
