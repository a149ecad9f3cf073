//! The asymptotically flat model coframe.
//!
//! With `g = 1 + 4 pi A rho^-2 + h` the model is
//! `theta = g theta0`, `theta1 = sqrt g (sqrt 2 dz + i (Z1bar g / g) theta0)`,
//! optionally twisted by `theta1 -> (theta1 - i conj(E) theta1bar) / sqrt(1 - |E|^2)`.
//! `h = O(rho^-3)` and `E = O(rho^-4)` are the remainder generators; with both
//! zero the `theta1` coefficient of `sqrt 2 dz` is real.

use std::f64::consts::PI;

use heisenberg_core::flat::{theta0_coeffs, theta1_flat_coeffs, z1bar_jet};
use heisenberg_core::{Complex64, Coords, Domain, Error, Jet, Result, ScalarField};
use ph_calculus::{Coframe, CoframeJets, OneForm, PHStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct AFModel {
    /// The mass parameter `A`.
    pub a: f64,
    /// Inner radius of the end; the coframe is defined for `rho > rho0`.
    pub rho0: f64,
    /// Real `h = O(rho^-3)` added to the `theta0` coefficient.
    pub contact_remainder: Option<ScalarField>,
    /// Complex `E = O(rho^-4)` producing the `dzbar` part of `theta1`.
    pub dzbar_remainder: Option<ScalarField>,
}

impl AFModel {
    /// Zero remainders; `rho0` is 1, or larger when `A < 0` keeps `g` away from 0.
    pub fn new(a: f64) -> Self {
        let rho0 = 1.0f64.max((8.0 * PI * (-a).max(0.0)).sqrt());
        AFModel { a, rho0, contact_remainder: None, dzbar_remainder: None }
    }

    pub fn with_rho0(mut self, rho0: f64) -> Self {
        self.rho0 = rho0;
        self
    }

    pub fn with_remainders(mut self, h: Option<ScalarField>, e: Option<ScalarField>) -> Self {
        self.contact_remainder = h;
        self.dzbar_remainder = e;
        self
    }

    /// Random remainders of the admissible orders with coefficients of size
    /// `amplitude`, reproducible from `seed`.
    pub fn with_noise(self, seed: u64, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || amplitude * rng.gen_range(-1.0..1.0);
        let c: [f64; 5] = std::array::from_fn(|_| draw());
        let h = ScalarField::closed_form("h", Domain::rho_positive(), move |x| {
            let rho = x.rho();
            let odd = &(&x.x.scale(c[0]) + &x.y.scale(c[1])) + &(&x.t * &rho.recip()).scale(c[2]);
            &odd * &rho.powi(-4)
        });
        let e = ScalarField::closed_form("E", Domain::rho_positive(), move |x| {
            let zb = x.zbar();
            (&(&zb * &zb) * &x.rho().powi(-6)).scale(Complex64::new(c[3], c[4]))
        });
        self.with_remainders(Some(h), Some(e))
    }
}

/// Coefficient jets of the model coframe at order `k`.
fn model_jets(m: &AFModel, p: &heisenberg_core::HPoint, k: usize) -> Result<CoframeJets> {
    let c = Coords::new(p, k + 1);
    let mut g = c.rho2().recip().scale(4.0 * PI * m.a).add_const(1.0);
    if let Some(h) = &m.contact_remainder {
        g += &h.jet(p, k + 1)?.re();
    }
    if g.value().re <= 0.0 {
        return Err(Error::Singular { what: "asymptotically flat model with g <= 0", point: *p });
    }
    let zb_g = &z1bar_jet(p, &g) * &g.truncate(k).recip();
    let g = g.truncate(k);
    let root = g.sqrt();
    let th0 = theta0_coeffs(p, k);
    let flat1 = theta1_flat_coeffs(k);
    let theta = th0.clone().map(|t| &g * &t);
    let mut theta1: [Jet; 3] = std::array::from_fn(|i| &root * &(&flat1[i] + &(&zb_g * &th0[i]).scale(Complex64::i())));
    if let Some(e) = &m.dzbar_remainder {
        let ej = e.jet(p, k)?;
        let norm2 = (&ej * &ej.conj()).re().scale(-1.0).add_const(1.0);
        if norm2.value().re <= 0.0 {
            return Err(Error::Singular { what: "dzbar remainder with |E| >= 1", point: *p });
        }
        let inv = norm2.powf(-0.5);
        let eb = ej.conj().scale(-Complex64::i());
        theta1 = std::array::from_fn(|i| &inv * &(&theta1[i] + &(&eb * &theta1[i].conj())));
    }
    Ok(CoframeJets { theta, theta1 })
}

pub fn af_coframe(m: &AFModel) -> Coframe {
    let model = m.clone();
    let name = format!("af(A={})", m.a);
    Coframe::new(&name, Domain::rho_above(m.rho0), move |p, k| model_jets(&model, p, k))
}

pub fn af_structure(m: &AFModel) -> PHStructure {
    PHStructure::new(af_coframe(m))
}

/// Leading connection form
/// `-6 pi A zbar (|z|^2 + it) rho^-6 dz - 6 pi A z (-|z|^2 + it) rho^-6 dzbar`
/// (no `theta0` part at this order).
pub fn af_connection_closed_form(m: &AFModel) -> OneForm {
    let a = m.a;
    let domain = Domain::rho_above(m.rho0);
    let dz = ScalarField::closed_form("omega.dz", domain.clone(), move |c| {
        (&(&c.zbar() * &c.w()) * &c.rho2().powi(-3)).scale(-6.0 * PI * a)
    });
    let dzbar = ScalarField::closed_form("omega.dzbar", domain, move |c| {
        let w = c.w().conj().scale(-1.0);
        (&(&c.z() * &w) * &c.rho2().powi(-3)).scale(-6.0 * PI * a)
    });
    OneForm::new(dz, dzbar, ScalarField::zero())
}
