//! Conformal change of contact form `theta^ = e^{2f} theta`.

use heisenberg_core::flat::apply_vector;
use heisenberg_core::{Complex64, HPoint, Jet, Result, ScalarField};
use ph_calculus::{dual_frame_jets, Coframe, CoframeJets, Idx, Local, OneForm, PHStructure};

use Idx::{One, OneBar};

/// The structure with contact form `e^{2f} theta` and admissible coframe
/// `theta1^ = e^f (theta1 + 2i f,_1bar theta)`; `f` must be real.
///
/// Everything else (frame, connection, torsion, curvature) is recomputed from
/// the new coframe, so comparing against [`conformal_laws`] is a real check.
pub fn conformal_change(st: &PHStructure, f: &ScalarField) -> PHStructure {
    let base = st.coframe().clone();
    let f = f.clone();
    let name = format!("e^(2 {}) {}", f.name(), st.name());
    let domain = st.domain().and(f.domain());
    PHStructure::new(Coframe::new(&name, domain, move |p, k| {
        let cj = base.jets(p, k)?;
        let [_, _, z1bar] = dual_frame_jets(&cj, p)?;
        let fj = f.jet(p, k + 1)?.re();
        let f1b = apply_vector(&z1bar, &fj).scale(Complex64::new(0.0, 2.0));
        let e = fj.truncate(k).exp();
        let e2 = &e * &e;
        let theta = cj.theta.clone().map(|c| &c * &e2);
        let theta1 = std::array::from_fn(|i| &e * &(&cj.theta1[i] + &(&f1b * &cj.theta[i])));
        Ok(CoframeJets { theta, theta1 })
    }))
}

/// Closed-form transformation laws, expressed through the base structure.
#[derive(Clone, Debug)]
pub struct ConformalLaws {
    /// `e^{-f} Z1`
    pub z1: [ScalarField; 3],
    /// `e^{-2f} (T + 2i f,_1 Z1bar - 2i f,_1bar Z1)`
    pub t: [ScalarField; 3],
    /// `omega + 3 (f,_1 theta1 - f,_1bar theta1bar) + i (f,_1bar1 + f,_11bar + 8 |f,_1|^2) theta`
    pub omega: OneForm,
    /// `e^{-2f} (A_11 + 2i f,_11 - 4i f,_1^2)`
    pub a11: ScalarField,
    /// `e^{-2f} (R - 4 Delta_b f - 8 |f,_1|^2)`
    pub r: ScalarField,
}

fn vector_field(st: &PHStructure, f: &ScalarField, name: &str, i: usize, which: u8) -> ScalarField {
    st.derived_from(f, &format!("{name}[{i}]"), 1, 0, move |loc, fj| {
        let fj = fj.re();
        let n = fj.order() - 1;
        let e = fj.truncate(n).scale(-1.0).exp();
        if which == 0 {
            return &e * &loc.z1[i].truncate(n);
        }
        let two_i = Complex64::new(0.0, 2.0);
        let f1 = loc.frame_deriv(&fj, One);
        let f1b = loc.frame_deriv(&fj, OneBar);
        let mut v = loc.t[i].truncate(n);
        v += &(&f1 * &loc.z1bar[i]).scale(two_i);
        v += &(&f1b * &loc.z1[i]).scale(-two_i);
        &(&e * &e) * &v
    })
}

pub fn conformal_laws(st: &PHStructure, f: &ScalarField) -> ConformalLaws {
    let name = st.name().to_string();
    let z1 = std::array::from_fn(|i| vector_field(st, f, &format!("{name}^.Z1"), i, 0));
    let t = std::array::from_fn(|i| vector_field(st, f, &format!("{name}^.T"), i, 1));

    let cf = st.coframe().clone();
    let fo = f.clone();
    let omega = OneForm::from_real(&format!("{name}^.omega"), st.domain().and(f.domain()), move |p, n| {
        let loc = Local::new(&cf, p, (n + 1).max(2))?;
        let fj = fo.jet(p, n + 2)?.re();
        Ok(omega_law(&loc, &fj, n))
    });

    let a11 = st.derived_from(f, &format!("{name}^.A11"), 2, 2, |loc, fj| {
        let fj = fj.re();
        let i = Complex64::i();
        let f1 = loc.cov(&fj, 0, &[One]);
        let f11 = loc.cov(&fj, 0, &[One, One]);
        let mut v = loc.a11.clone();
        v += &f11.scale(2.0 * i);
        v += &(&f1 * &f1).scale(-4.0 * i);
        &fj.scale(-2.0).exp() * &v
    });

    let r = st.derived_from(f, &format!("{name}^.R"), 2, 2, |loc, fj| {
        let fj = fj.re();
        let f1 = loc.cov(&fj, 0, &[One]);
        let lap = ph_calculus::ops::sublaplacian_jet(loc, &fj);
        let mut v = loc.r.clone();
        v += &lap.scale(-4.0);
        v += &(&f1 * &f1.conj()).scale(-8.0);
        &fj.scale(-2.0).exp() * &v
    });

    ConformalLaws { z1, t, omega, a11, r }
}

fn omega_law(loc: &Local, fj: &Jet, n: usize) -> [Jet; 3] {
    let i = Complex64::i();
    let f1 = loc.cov(fj, 0, &[One]);
    let f1b = loc.cov(fj, 0, &[OneBar]);
    let mixed = &(&loc.cov(fj, 0, &[OneBar, One]) + &loc.cov(fj, 0, &[One, OneBar])) + &(&f1 * &f1b).scale(8.0);
    let omega = loc.omega();
    let th = &loc.coframe.theta;
    let th1 = &loc.coframe.theta1;
    std::array::from_fn(|k| {
        let mut w = omega[k].truncate(n);
        w += &(&f1.truncate(n) * &th1[k].truncate(n)).scale(3.0);
        w += &(&f1b.truncate(n) * &th1[k].conj().truncate(n)).scale(-3.0);
        w += &(&mixed.truncate(n) * &th[k].truncate(n)).scale(i);
        w
    })
}

/// Largest `|lhs - rhs| / max(1, |rhs|)` over `points`.
fn max_rel_diff(lhs: &ScalarField, rhs: &ScalarField, points: &[HPoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let (a, b) = (lhs.value(p)?, rhs.value(p)?);
        worst = worst.max((a - b).norm() / b.norm().max(1.0));
    }
    Ok(worst)
}

/// Residual of `L^_b phi = u^-3 L_b (u phi)` with `u = e^f`, relative to the
/// size of the right side where that exceeds one.
pub fn check_lb_covariance(st: &PHStructure, f: &ScalarField, phi: &ScalarField, points: &[HPoint]) -> Result<f64> {
    let hat = conformal_change(st, f);
    let u = f.exp();
    let lhs = hat.conformal_sublap(phi);
    let rhs = st.conformal_sublap(&u.mul(phi)).mul(&f.scale(-3.0).exp());
    max_rel_diff(&lhs, &rhs, points)
}

/// Residual of `P^ phi = e^{-4f} P phi` for real `phi`, relative as in
/// [`check_lb_covariance`].
pub fn check_paneitz_covariance(st: &PHStructure, f: &ScalarField, phi: &ScalarField, points: &[HPoint]) -> Result<f64> {
    let hat = conformal_change(st, f);
    let lhs = hat.paneitz(phi);
    let rhs = st.paneitz(phi).mul(&f.scale(-4.0).exp());
    max_rel_diff(&lhs, &rhs, points)
}
