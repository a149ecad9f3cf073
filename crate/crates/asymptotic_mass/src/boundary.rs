//! Closed-form boundary integrals over gauge spheres.
//!
//! Every integrand here is homogeneous of degree 0 under the dilations, so
//! the integral over `S_Lambda` does not depend on `Lambda` and the value at
//! infinity is the value on the unit sphere.

use std::f64::consts::{PI, SQRT_2};

use heisenberg_core::quad::{wedge_on, SurfaceChart};
use heisenberg_core::{flat_t, flat_z1, flat_z1bar, Complex64, Domain, HPoint, Result, ScalarField};

pub const BOUNDARY_CHART: SurfaceChart = SurfaceChart { radius: 1.0, n_phi: 64, n_alpha: 64 };

const I: Complex64 = Complex64::new(0.0, 1.0);

fn dz() -> [Complex64; 3] {
    [Complex64::new(1.0, 0.0), I, Complex64::new(0.0, 0.0)]
}

fn dzbar() -> [Complex64; 3] {
    [Complex64::new(1.0, 0.0), -I, Complex64::new(0.0, 0.0)]
}

fn dt() -> [Complex64; 3] {
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
}

/// `dt - i zbar dz`
fn theta_without_dzbar(p: &HPoint) -> [Complex64; 3] {
    let c = -I * p.z().conj();
    [c, c * I, Complex64::new(1.0, 0.0)]
}

fn theta0(p: &HPoint) -> [Complex64; 3] {
    [Complex64::new(-2.0 * p.y, 0.0), Complex64::new(2.0 * p.x, 0.0), Complex64::new(1.0, 0.0)]
}

fn scaled(s: Complex64, f: [Complex64; 3]) -> [Complex64; 3] {
    f.map(|c| s * c)
}

fn integrate<F>(chart: &SurfaceChart, f: F) -> Result<Complex64>
where
    F: Fn(&HPoint, &[f64; 3], &[f64; 3]) -> Result<Complex64> + Sync,
{
    chart.integrate(|n| f(&n.point, &n.d_phi, &n.d_alpha))
}

/// `oint weight dphi ^ dt` over the chart.
pub fn phi_t_integral(chart: &SurfaceChart, weight: impl Fn(&HPoint) -> f64 + Sync) -> Result<f64> {
    let v = integrate(chart, |p, u, v| {
        let r2 = p.r2();
        let dphi = [Complex64::new(-p.y / r2, 0.0), Complex64::new(p.x / r2, 0.0), Complex64::new(0.0, 0.0)];
        Ok(wedge_on(dphi, dt(), u, v) * weight(p))
    })?;
    Ok(v.re)
}

/// Flux `-i oint f,_1 theta1 ^ theta + conj` of the flat subgradient of
/// `f = rho^-2` through the chart's sphere: the integral of `Delta_b f` over
/// the enclosed ball.
pub fn flux_rho_inv_sq_on(chart: &SurfaceChart) -> Result<f64> {
    let f1 = flat_z1(&ScalarField::closed_form("rho^-2", Domain::rho_positive(), |c| c.rho2().recip()));
    let v = integrate(chart, |p, u, v| {
        let form = -I * f1.value(p)? * wedge_on(scaled(SQRT_2.into(), dz()), theta0(p), u, v);
        Ok(form + form.conj())
    })?;
    Ok(v.re)
}

pub fn flux_rho_inv_sq() -> Result<f64> {
    flux_rho_inv_sq_on(&BOUNDARY_CHART)
}

/// The model `beta,_1bar = 1/sqrt 2 - 3 sqrt 2 pi A rho^-2 - sqrt 2 A / (|z|^2 + it)`.
pub fn beta_1bar_model(a: f64) -> ScalarField {
    ScalarField::closed_form("beta,1bar", Domain::rho_positive(), move |c| {
        let tail = &c.rho2().recip().scale(-3.0 * SQRT_2 * PI * a) + &c.w().recip().scale(-SQRT_2 * a);
        tail.add_const(std::f64::consts::FRAC_1_SQRT_2)
    })
}

/// `i oint Z1bar beta,_1bar dzbar ^ (dt - i zbar dz) + conj`.
pub fn boundary_i43_on(a: f64, chart: &SurfaceChart) -> Result<f64> {
    let zb = flat_z1bar(&beta_1bar_model(a));
    let v = integrate(chart, |p, u, v| {
        let form = I * zb.value(p)? * wedge_on(dzbar(), theta_without_dzbar(p), u, v);
        Ok(form + form.conj())
    })?;
    Ok(v.re)
}

pub fn boundary_i43(a: f64) -> Result<f64> {
    boundary_i43_on(a, &BOUNDARY_CHART)
}

/// `-oint (T beta,_1bar) z sqrt 2 dzbar ^ (dt - i zbar dz) + conj`, with the
/// leading part `T = d_t` of the Reeb field.
pub fn boundary_i44_on(a: f64, chart: &SurfaceChart) -> Result<f64> {
    let tb = flat_t(&beta_1bar_model(a));
    let v = integrate(chart, |p, u, v| {
        let form = -tb.value(p)? * p.z() * SQRT_2 * wedge_on(dzbar(), theta_without_dzbar(p), u, v);
        Ok(form + form.conj())
    })?;
    Ok(v.re)
}

pub fn boundary_i44(a: f64) -> Result<f64> {
    boundary_i44_on(a, &BOUNDARY_CHART)
}

/// `4 (beta_-1),_{1bar 1bar 1}` from `(beta_-1),_{1bar 1bar} = 2 pi A zbar (|z|^2 + it) rho^-6`.
pub fn beta_minus1_third(a: f64) -> ScalarField {
    let second = ScalarField::closed_form("(beta_-1),1bar1bar", Domain::rho_positive(), move |c| {
        (&(&c.zbar() * &c.w()) * &c.rho2().powi(-3)).scale(2.0 * PI * a)
    });
    flat_z1(&second).scale(4.0)
}

/// `oint 4 (beta_-1),_{1bar 1bar 1} (i sqrt 2 z dt ^ dz - sqrt 2 z^2 dzbar ^ dz)`.
pub fn paneitz_boundary_on(a: f64, chart: &SurfaceChart) -> Result<f64> {
    let b = beta_minus1_third(a);
    let v = integrate(chart, |p, u, v| {
        let z = p.z();
        let form = I * SQRT_2 * z * wedge_on(dt(), dz(), u, v) - SQRT_2 * z * z * wedge_on(dzbar(), dz(), u, v);
        Ok(b.value(p)? * form)
    })?;
    Ok(v.re)
}

pub fn paneitz_boundary(a: f64) -> Result<f64> {
    paneitz_boundary_on(a, &BOUNDARY_CHART)
}
