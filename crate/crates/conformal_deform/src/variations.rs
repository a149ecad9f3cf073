//! Integrated variations: the Paneitz quadratic form along a deformation and
//! the mass of the deformed Heisenberg group.

use heisenberg_core::quad::{shell_integral, weighted_sum, whole_space_integral, Estimate, ShellRule};
use heisenberg_core::{Complex64, Domain, Error, HPoint, Result, ScalarField};
use ph_calculus::{Idx, PHStructure};

use crate::deform::{deform_first_order, DeformationField};

use Idx::{One, OneBar};

/// First and second derivative in `s` of `(P_(s) psi, psi)` at `s = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QformVariations {
    pub first: f64,
    pub second: f64,
}

/// Variations of the Paneitz form for real `psi` over weighted `nodes`
/// (weights include the volume `theta ^ d theta`).
///
/// The first variation is `16 Im int E_1bar1bar psi,_1 (psi,_{1bar 1 1} + i A_11 psi,_1bar)`.
/// The second is `16 Re int (2 |F,_1|^2 - F,_1^2 - |F,_1bar|^2 - R |F|^2 + i A_11 F^2)`
/// with `F = E_1bar1bar psi,_1`; it assumes `psi,_{1bar 1 1} + i A_11 psi,_1bar = 0`,
/// e.g. `psi` in the kernel of `P` on a base with transverse symmetry.
pub fn paneitz_qform_variations(
    st: &PHStructure,
    e: &DeformationField,
    psi: &ScalarField,
    nodes: &[(HPoint, f64)],
) -> Result<QformVariations> {
    let (cf, ef, pf) = (st.coframe().clone(), e.e11.clone(), psi.clone());
    let i = Complex64::i();
    let vals = weighted_sum(nodes, |p| {
        let loc = ph_calculus::Local::new(&cf, p, 4)?;
        let pj = pf.jet(p, 4)?.re();
        let ebar = ef.jet(p, 4)?.conj();
        let p3 = ph_calculus::ops::p3_jet(&loc, &pj);
        let psi1 = loc.cov(&pj, 0, &[One]);
        let first = (&ebar * &psi1).value() * p3.value();
        let fj = &ebar * &psi1;
        let f1 = loc.cov(&fj, -1, &[One]).value();
        let f1b = loc.cov(&fj, -1, &[OneBar]).value();
        let (fv, r, a) = (fj.value(), loc.r.value(), loc.a11.value());
        let second = 2.0 * f1.norm_sqr() - f1 * f1 - f1b.norm_sqr() - r * fv.norm_sqr() + i * a * fv * fv;
        // the real slot carries the first integrand, the imaginary slot the second
        Ok(Complex64::new(first.im, second.re))
    })?;
    Ok(QformVariations { first: 16.0 * vals.re, second: 16.0 * vals.im })
}

/// `E_11 = (t + i (|z|^2 + 1))^-k`, a CR function on `H1`.
pub fn cr_deformation(k: i32) -> DeformationField {
    DeformationField::new(ScalarField::closed_form(&format!("(t+i(|z|^2+1))^-{k}"), Domain::everywhere(), move |c| {
        c.v().add_const(Complex64::i()).powi(-k)
    }))
}

/// `|E_11,_1|^2` on the flat model for [`cr_deformation`].
pub fn cr_mass_integrand(k: i32) -> ScalarField {
    let e = cr_deformation(k).e11;
    heisenberg_core::flat_z1(&e).map_jet("|E_11,1|^2", 0, |_, j| Ok((j * &j.conj()).re()))
}

/// Mass change `-(3/2) int |E_11,_1|^2 theta0 ^ d theta0` for the CR
/// deformation [`cr_deformation`] of the flat model; requires `k >= 3`.
pub fn mass_first_variation(k: i32, rule: &ShellRule) -> Result<Estimate> {
    if k < 3 {
        return Err(Error::Quadrature(format!("k = {k}: the tail of |E_11,1|^2 does not decay fast enough (need k >= 3)")));
    }
    let g = cr_mass_integrand(k);
    let est = whole_space_integral(&|p: &HPoint| g.value(p), 1.0 / 64.0, 1.0, 64.0, rule)?;
    Ok(Estimate { value: est.value * -1.5, error: 1.5 * est.error })
}

/// `-(3/4) int R' theta0 ^ d theta0` over the gauge annulus `[rho_a, rho_b]`
/// for a deformation of the flat model supported there.
pub fn mass_variation_from_rdot(e: &DeformationField, rho_a: f64, rho_b: f64, rule: &ShellRule) -> Result<f64> {
    let rdot = deform_first_order(&PHStructure::flat(), e).r;
    let v = shell_integral(&|p: &HPoint| rdot.value(p), rho_a, rho_b, rule)?;
    Ok(-0.75 * v.re)
}
