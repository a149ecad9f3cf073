//! The source `f = 4 pi A zbar (|z|^2 + it) / rho^6`, the two discontinuous
//! solutions of `Box_b g = -f` and the model `beta` built from them.

use std::f64::consts::{PI, SQRT_2};

use heisenberg_core::{flat_z1bar, Complex64, Coords, Domain, Error, HPoint, Jet, Result, ScalarField};

fn i() -> Complex64 {
    Complex64::i()
}

fn source_jet(c: &Coords, a: f64) -> Jet {
    &(&c.zbar() * &c.w()) * &c.rho4().powf(-1.5).scale(4.0 * PI * a)
}

pub fn source_field(a: f64) -> ScalarField {
    ScalarField::closed_form(&format!("f(A={a})"), Domain::rho_positive(), move |c| source_jet(c, a))
}

pub fn source_f(a: f64, p: &HPoint) -> Result<Complex64> {
    source_field(a).value(p)
}

/// `-4 i pi A rho^2 / (v z)`
fn g_tilde_jet(c: &Coords, a: f64) -> Jet {
    &c.rho2() * &(&c.v() * &c.z()).recip().scale(-4.0 * PI * a * i())
}

/// Defined off the axis `z = 0`.
pub fn g_tilde_field(a: f64) -> ScalarField {
    ScalarField::closed_form(&format!("g~(A={a})"), Domain::z_nonzero(), move |c| g_tilde_jet(c, a))
}

/// `g~ - 4 i pi A (-1/z)` for `t > 0`, `+1/z` for `t < 0`; defined off `t = 0`
/// (and off the axis, where `1/z` blows up).
pub fn g_hat_field(a: f64) -> ScalarField {
    let domain = Domain::t_nonzero().and(&Domain::z_nonzero());
    ScalarField::closed_form(&format!("g^(A={a})"), domain, move |c| {
        let sign = if c.point.t > 0.0 { -1.0 } else { 1.0 };
        &g_tilde_jet(c, a) + &c.z().recip().scale(-4.0 * PI * a * i() * sign)
    })
}

pub fn spurious_g_tilde(a: f64, p: &HPoint) -> Result<Complex64> {
    g_tilde_field(a).value(p)
}

pub fn spurious_g_hat(a: f64, p: &HPoint) -> Result<Complex64> {
    g_hat_field(a).value(p)
}

/// `Z1bar g~`, computed from jets off the axis and extended by its limit
/// `-2 sqrt 2 pi A / rho^2` on `z = 0`.
pub fn gtilde_z1bar(a: f64, p: &HPoint) -> Result<Complex64> {
    let rho2 = (p.r2() * p.r2() + p.t * p.t).sqrt();
    if rho2 == 0.0 {
        return Err(Error::Singular { what: "Z1bar g~", point: *p });
    }
    if p.r2() == 0.0 {
        return Ok(Complex64::new(-2.0 * SQRT_2 * PI * a / rho2, 0.0));
    }
    flat_z1bar(&g_tilde_field(a)).value(p)
}

/// `beta = zbar + g~ - A log(w) / z` with `w = |z|^2 + it`.
///
/// The last term is a primitive of `-sqrt 2 A / w` under `Z1bar`, so
/// `Z1bar beta = 1/sqrt 2 - 2 sqrt 2 pi A / rho^2 - sqrt 2 A / w` off the
/// axis. It carries a `log rho` on top of the degree `-1` homogeneity of
/// the rest, which only enters beyond the order the boundary terms see.
pub fn beta_model(a: f64) -> ScalarField {
    ScalarField::closed_form(&format!("beta(A={a})"), Domain::z_nonzero(), move |c| {
        let log_term = &c.w().ln() * &c.z().recip().scale(-a);
        &(&c.zbar() + &g_tilde_jet(c, a)) + &log_term
    })
}

/// `Z1bar beta` for the model end, to the order the boundary terms see.
///
/// The end's frame is `Z1bar = (1 - 2 pi A rho^-2 + O(rho^-3)) Z1bar_flat + ...`;
/// at this order the correction only acts on `zbar`, giving
/// `1/sqrt 2 - 3 sqrt 2 pi A / rho^2 - sqrt 2 A / w`.
pub fn beta_1bar_leading(a: f64) -> ScalarField {
    let frame = ScalarField::closed_form("-2 pi A rho^-2 / sqrt 2", Domain::rho_positive(), move |c| {
        c.rho2().recip().scale(-2.0 * PI * a / SQRT_2)
    });
    flat_z1bar(&beta_model(a)).add(&frame).renamed(&format!("beta,1bar(A={a})"))
}

/// Radial cutoff `chi(rho)`: `0` for `rho <= inner`, `1` for `rho >= outer`,
/// smooth and nondecreasing in between.
pub fn cutoff_field(inner: f64, outer: f64) -> ScalarField {
    ScalarField::from_jet_fn(&format!("chi[{inner},{outer}]"), Domain::everywhere(), move |p, k| {
        let rho = heisenberg_core::gauge_rho(p);
        if rho <= inner {
            return Ok(Jet::zero(k));
        }
        if rho >= outer {
            return Ok(Jet::constant(k, 1.0));
        }
        let s = Coords::new(p, k).rho().add_const(-inner).scale(1.0 / (outer - inner));
        let rise = (-&s.recip()).exp();
        let fall = (-&(-&s).add_const(1.0).recip()).exp();
        Ok(&rise * &(&rise + &fall).recip())
    })
}

/// `chi f`, vanishing near the origin and equal to `f` for `rho >= 2`.
pub fn cut_source_field(a: f64) -> ScalarField {
    let chi = cutoff_field(1.0, 2.0);
    ScalarField::from_jet_fn(&format!("chi f(A={a})"), Domain::everywhere(), move |p, k| {
        if heisenberg_core::gauge_rho(p) <= 1.0 {
            return Ok(Jet::zero(k));
        }
        Ok(&chi.jet(p, k)? * &source_jet(&Coords::new(p, k), a))
    })
}
