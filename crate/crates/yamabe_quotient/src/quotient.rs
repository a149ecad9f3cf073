//! The Tanaka-Webster quotient on a pseudohermitian chart, and its value on
//! the glued test function split into bubble mass and numerator deficit.

use heisenberg_core::flat::{apply_vector, z1_jet};
use heisenberg_core::quad::{shell_integral, wedge_on, SurfaceChart};
use heisenberg_core::{Complex64, Coords, Domain, HPoint, Result, ScalarField};
use ph_calculus::structure::exterior_d;
use ph_calculus::{dual_frame_jets, PHStructure};

use crate::bubble::{bubble, bubble_jet, quotient_parts};
use crate::glue::{green_jet, test_function_field, QuotientConfig};
use crate::integrate::{ball, exterior, Value};

/// Pointwise densities against `dW = theta0 ^ d theta0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Densities {
    /// `|grad_b u|^2 theta ^ d theta / dW`
    pub gradient: f64,
    /// `R u^2 theta ^ d theta / dW`
    pub curvature: f64,
    /// `u^4 theta ^ d theta / dW`
    pub quartic: f64,
    /// `|grad0_b u|^2` with the flat frame and volume
    pub flat_gradient: f64,
}

/// Volume ratio `theta ^ d theta / (theta0 ^ d theta0)` and `Z1` at `p`.
fn frame_at(st: &PHStructure, p: &HPoint) -> Result<(f64, [Complex64; 3])> {
    let cj = st.coframe().jets(p, 1)?;
    let [_, z1, _] = dual_frame_jets(&cj, p)?;
    let th = &cj.theta;
    let d = exterior_d(th);
    // theta ^ d theta = (th_x d_yt - th_y d_xt + th_t d_xy) dx dy dt, and dW = 4 dx dy dt
    let vol = (th[0].value() * d[2].value() - th[1].value() * d[1].value() + th[2].value() * d[0].value()).re / 4.0;
    Ok((vol, [z1[0].value(), z1[1].value(), z1[2].value()]))
}

pub fn densities(u: &ScalarField, st: &PHStructure, curvature: &ScalarField, p: &HPoint) -> Result<Densities> {
    let (vol, z1) = frame_at(st, p)?;
    let uj = u.jet(p, 1)?;
    let frame = z1.map(|c| heisenberg_core::Jet::constant(0, c));
    let zu = apply_vector(&frame, &uj).value();
    let flat = z1_jet(p, &uj).value();
    let val = uj.value().re;
    let r = curvature.value(p)?.re;
    Ok(Densities {
        gradient: 2.0 * zu.norm_sqr() * vol,
        curvature: r * val * val * vol,
        quartic: val.powi(4) * vol,
        flat_gradient: 2.0 * flat.norm_sqr(),
    })
}

/// Numerator, denominator and value of the quotient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quotient {
    pub numerator: Value,
    pub denominator: Value,
    pub value: f64,
    pub error: f64,
}

fn real(v: f64) -> Result<Complex64> {
    Ok(Complex64::new(v, 0.0))
}

/// `int (|grad_b u|^2 + R u^2 / 4) / (int u^4)^{1/2}` over the chart, with
/// shells anchored at `cfg.rho0` from `cfg.inner / lambda` out to
/// `cfg.outer rho0`. `u` should decay at least like `rho^-2`.
pub fn quotient(u: &ScalarField, st: &PHStructure, cfg: &QuotientConfig) -> Result<Quotient> {
    cfg.validate()?;
    let r = &cfg.curvature;
    let energy = |p: &HPoint| {
        let d = densities(u, st, r, p)?;
        real(d.gradient + 0.25 * d.curvature)
    };
    let quartic = |p: &HPoint| real(densities(u, st, r, p)?.quartic);
    let (inner, outer) = (cfg.inner / cfg.lambda, cfg.outer * cfg.rho0);
    let numerator = ball(&energy, cfg.rho0, inner, &cfg.rule)?.plus(exterior(&energy, cfg.rho0, outer, &cfg.rule)?);
    let denominator = ball(&quartic, cfg.rho0, inner, &cfg.rule)?.plus(exterior(&quartic, cfg.rho0, outer, &cfg.rule)?);
    let (value, error) = quotient_parts(numerator, denominator);
    Ok(Quotient { numerator, denominator, value, error })
}

/// The quotient of the glued test function on a compact manifold that is
/// modelled near the point by `st` on `rho <= 2 rho0` and on which `G` is
/// harmonic off `rho <= rho0`. The numerator is written as
/// `int_{rho <= rho0} omega^4 dW - deficit`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GluedQuotient {
    /// `int_{rho <= rho0} omega^4 dW`
    pub bubble_mass: Value,
    /// `int_{rho <= rho0} (omega^4 dW - (|grad_b u|^2 + R u^2 / 4) theta ^ d theta)`
    pub inner_gap: Value,
    /// Energy of `eps0 G` off the ball, from the Green identity.
    pub green_energy: f64,
    /// Energy of `u` minus that of `eps0 G` on `rho0 < rho < 2 rho0`.
    pub blend_energy: Value,
    /// `bubble_mass - numerator`, assembled without forming the difference
    /// of the two large terms.
    pub deficit: Value,
    pub numerator: Value,
    pub denominator: Value,
    pub value: f64,
    pub error: f64,
}

/// Surface rule for the Green flux on `rho = rho0`.
pub const FLUX_CHART: (usize, usize) = (64, 128);

/// `-(i oint G (Z1bar G) theta1bar ^ theta - i oint G (Z1 G) theta1 ^ theta)`
/// over `rho = rho0` with the flat frame: the energy `int (|grad_b G|^2 + R G^2 / 4)`
/// of the region outside the sphere when `G` is harmonic there.
pub fn green_flux_energy(a_tilde: f64, c1: f64, rho0: f64) -> Result<f64> {
    let chart = SurfaceChart::new(rho0, FLUX_CHART.0, FLUX_CHART.1);
    let s2 = std::f64::consts::SQRT_2;
    let i = Complex64::i();
    let v = chart.integrate(|node| {
        let p = &node.point;
        let g = green_jet(a_tilde, c1, &Coords::new(p, 1));
        let (gv, zg) = (g.value(), z1_jet(p, &g).value());
        let th0 = [Complex64::new(-2.0 * p.y, 0.0), Complex64::new(2.0 * p.x, 0.0), Complex64::new(1.0, 0.0)];
        let th1 = [Complex64::new(s2, 0.0), Complex64::new(0.0, s2), Complex64::new(0.0, 0.0)];
        let th1b = th1.map(|c| c.conj());
        let (u, w) = (&node.d_phi, &node.d_alpha);
        let form = i * gv * zg.conj() * wedge_on(th1b, th0, u, w) - i * gv * zg * wedge_on(th1, th0, u, w);
        Ok(-form)
    })?;
    Ok(v.re)
}

pub fn glued_quotient(st: &PHStructure, cfg: &QuotientConfig) -> Result<GluedQuotient> {
    let u = test_function_field(cfg)?;
    let (lambda, eps0, r) = (cfg.lambda, cfg.eps0(), &cfg.curvature);
    let (a_tilde, c1) = (cfg.a_tilde, cfg.w_coeff);
    let green = ScalarField::closed_form("eps0 G", Domain::everywhere(), move |c| green_jet(a_tilde, c1, c).scale(eps0));
    let inner = cfg.inner / lambda;
    let rho0 = cfg.rho0;

    let inside_gap = |p: &HPoint| {
        let d = densities(&u, st, r, p)?;
        real(bubble(lambda, p).powi(4) - d.gradient - 0.25 * d.curvature)
    };
    let blend = |p: &HPoint| {
        let (du, dg) = (densities(&u, st, r, p)?, densities(&green, st, r, p)?);
        real(du.gradient - dg.gradient + 0.25 * (du.curvature - dg.curvature))
    };
    let mass = |p: &HPoint| real(bubble(lambda, p).powi(4));
    let quartic = |p: &HPoint| real(densities(&u, st, r, p)?.quartic);

    let bubble_mass = ball(&mass, rho0, inner, &cfg.rule)?;
    let inner_gap = ball(&inside_gap, rho0, inner, &cfg.rule)?;
    let green_energy = eps0 * eps0 * green_flux_energy(a_tilde, c1, rho0)?;
    let blend_energy = Value::new(shell_integral(&blend, rho0, 2.0 * rho0, &cfg.rule)?.re, 0.0);
    let deficit = Value::new(inner_gap.value - green_energy - blend_energy.value, inner_gap.error);
    let numerator = Value::new(bubble_mass.value - deficit.value, bubble_mass.error + deficit.error);

    // the rest of the manifold enters the denominator through the chart
    // region rho < manifold_radius rho0
    let mut denominator = ball(&quartic, rho0, inner, &cfg.rule)?;
    let mut r_a = rho0;
    while r_a < cfg.manifold_radius * rho0 * (1.0 - 1e-12) {
        let r_b = (2.0 * r_a).min(cfg.manifold_radius * rho0);
        denominator.value += shell_integral(&quartic, r_a, r_b, &cfg.rule)?.re;
        r_a = r_b;
    }
    let (value, error) = quotient_parts(numerator, denominator);
    Ok(GluedQuotient { bubble_mass, inner_gap, green_energy, blend_energy, deficit, numerator, denominator, value, error })
}

/// Size of the two curved-structure corrections inside `rho <= rho0` for
/// `u = omega_lambda`, with the constants they imply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderReport {
    /// `int (|grad_b omega|^2 theta ^ d theta - |grad0_b omega|^2 dW)`
    pub gradient_gap: f64,
    /// `int R omega^2 theta ^ d theta`
    pub curvature_term: f64,
    /// `|gradient_gap| lambda^2 / rho0^2`
    pub c_gradient: f64,
    /// `|curvature_term| lambda^2 / rho0`
    pub c_curvature: f64,
}

pub fn remainder_report(st: &PHStructure, cfg: &QuotientConfig) -> Result<RemainderReport> {
    cfg.validate()?;
    let lambda = cfg.lambda;
    let omega = ScalarField::closed_form("omega", Domain::everywhere(), move |c: &Coords| bubble_jet(lambda, c));
    let r = &cfg.curvature;
    let inner = cfg.inner / lambda;
    let grad = |p: &HPoint| {
        let d = densities(&omega, st, r, p)?;
        real(d.gradient - d.flat_gradient)
    };
    let curv = |p: &HPoint| real(densities(&omega, st, r, p)?.curvature);
    let gradient_gap = ball(&grad, cfg.rho0, inner, &cfg.rule)?.value;
    let curvature_term = ball(&curv, cfg.rho0, inner, &cfg.rule)?.value;
    let l2 = lambda * lambda;
    Ok(RemainderReport {
        gradient_gap,
        curvature_term,
        c_gradient: gradient_gap.abs() * l2 / (cfg.rho0 * cfg.rho0),
        c_curvature: curvature_term.abs() * l2 / cfg.rho0,
    })
}
