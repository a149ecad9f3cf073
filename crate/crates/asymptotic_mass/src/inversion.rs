//! Consistency of the blow-up picture: the near-pole forms of `G^2 theta`,
//! pulled back by CR inversion, rotated and rescaled, against the model end.

use std::f64::consts::PI;

use heisenberg_core::flat::{theta0_coeffs, theta1_flat_coeffs, z1_jet, z1bar_jet};
use heisenberg_core::quad::polar_point;
use heisenberg_core::{compose_jet, cr_uninvert, Axis, Complex64, Coords, Domain, HPoint, Jet, Result};
use ph_calculus::{Coframe, CoframeJets, PHStructure};

use crate::log_log_slope;
use crate::model::{af_coframe, af_connection_closed_form, AFModel};

pub const CHECK_RADII: [f64; 3] = [10.0, 20.0, 40.0];

const DIRECTIONS: [(f64, f64); 5] = [(-1.0, 0.3), (-0.4, 2.2), (0.1, 4.0), (0.6, 1.2), (1.2, 5.1)];

#[derive(Clone, Debug, PartialEq)]
pub struct InversionReport {
    pub rho_star: Vec<f64>,
    /// Max relative gap of the `theta` coefficients against the model coframe.
    pub theta_rel: Vec<f64>,
    /// Max gap of the `theta1` coefficients, relative to their size.
    pub theta1_rel: Vec<f64>,
    /// Max gap between the structure-solve connection and its closed form.
    pub omega_gap: Vec<f64>,
    /// Log-log slope of `omega_gap`.
    pub omega_slope: f64,
    /// `omega_rotated - omega_unrotated - i dphi` for the rotation `e^{-i phi}`.
    pub rotation_residual: f64,
    /// Residual of `Z1 phi = 3 zbar vbar / (sqrt 2 rho^4)`, `T phi = -3|z|^2/rho^4`.
    pub dphi_residual: f64,
}

/// `G = rho^-2 / (2 pi) + A` near the pole.
fn green_jet(c: &Coords, a: f64) -> Jet {
    c.rho2().recip().scale(1.0 / (2.0 * PI)).add_const(a)
}

/// `G^2 theta0`, `G sqrt 2 dz + 2i (Z1bar G) theta0`.
fn near_pole_jets(p: &HPoint, k: usize, a: f64) -> CoframeJets {
    let c = Coords::new(p, k + 1);
    let g = green_jet(&c, a);
    let gb = z1bar_jet(p, &g).scale(Complex64::new(0.0, 2.0));
    let g = g.truncate(k);
    let th0 = theta0_coeffs(p, k);
    let flat1 = theta1_flat_coeffs(k);
    let g2 = &g * &g;
    CoframeJets {
        theta: th0.clone().map(|t| &g2 * &t),
        theta1: std::array::from_fn(|i| &(&g * &flat1[i]) + &(&gb * &th0[i])),
    }
}

/// Jets at `p*` of the map `(z*, t*) -> (z, t) = (-z*/v*, -t*/|v*|^2)`, on `(x, y, t)`.
fn uninvert_jets(p: &HPoint, order: usize) -> [Jet; 3] {
    let c = Coords::new(p, order);
    let v = c.v();
    let z = -(&c.z() * &v.recip());
    let t = -(&c.t * &(&v * &v.conj()).recip());
    [z.re(), z.im(), t]
}

/// `u = rho^-2 vbar^2 / v = e^{-i phi}` in near-pole coordinates, as a jet at
/// `p*`, with `i phi = 2 log v - 2 log rho - log vbar`. Under `v v* = -1` this
/// is the unit factor that makes the `dz*` coefficient of `theta1` positive.
fn rotation_jet(map: &[Jet; 3]) -> Jet {
    let z = &map[0] + &map[1].scale(Complex64::i());
    let v = &map[2] + &(&z * &z.conj()).scale(Complex64::i());
    let n = (&v * &v.conj()).sqrt();
    &(&v.conj() * &v.conj()) * &(&v * &n).recip()
}

fn pull_back(coeffs: &[Jet; 3], map: &[Jet; 3], k: usize) -> [Jet; 3] {
    let axes = [Axis::X, Axis::Y, Axis::T];
    let comp: Vec<Jet> = coeffs.iter().map(|c| compose_jet(c, &map.clone().map(|m| m.truncate(k)))).collect();
    std::array::from_fn(|i| {
        let mut acc = Jet::zero(k);
        for j in 0..3 {
            acc += &(&comp[j] * &map[j].deriv(axes[i]).truncate(k));
        }
        acc
    })
}

/// The pulled-back, rotated (when `rotate`) and rescaled near-pole coframe,
/// defined for `rho* > rho_min`.
pub fn inverted_blowup(a: f64, rotate: bool, rho_min: f64) -> Coframe {
    let name = format!("inverted blow-up (A={a})");
    Coframe::new(&name, Domain::rho_above(rho_min), move |p, k| {
        let map = uninvert_jets(p, k + 1);
        let q = cr_uninvert(p)?;
        let near = near_pole_jets(&q, k, a);
        let theta = pull_back(&near.theta, &map, k).map(|c| c.scale(4.0 * PI * PI));
        let mut theta1 = pull_back(&near.theta1, &map, k).map(|c| c.scale(2.0 * PI));
        if rotate {
            let u = rotation_jet(&map).truncate(k);
            theta1 = theta1.map(|c| &u * &c);
        }
        Ok(CoframeJets { theta, theta1 })
    })
}

fn max_gap(a: &[Jet; 3], b: &[Jet; 3]) -> (f64, f64) {
    let gap = (0..3).map(|i| (a[i].value() - b[i].value()).norm()).fold(0.0, f64::max);
    let size = (0..3).map(|i| b[i].value().norm()).fold(0.0, f64::max);
    (gap, size)
}

fn dphi_residual() -> f64 {
    let mut worst = 0.0f64;
    for &(a, phi) in &DIRECTIONS {
        let p = polar_point(0.3, a, phi);
        let c = Coords::new(&p, 2);
        let (v, rho) = (c.v(), c.rho());
        // i phi = 2 log v - 2 log rho - log vbar
        let iphi = &(&v.ln().scale(2.0) - &rho.ln().scale(2.0)) - &v.conj().ln();
        let phi_jet = iphi.scale(-Complex64::i());
        let rho4 = p.r2() * p.r2() + p.t * p.t;
        let vv = Complex64::new(p.t, p.r2());
        let want_z1 = 3.0 * p.z().conj() * vv.conj() / (std::f64::consts::SQRT_2 * rho4);
        let want_t = -3.0 * p.r2() / rho4;
        worst = worst.max((z1_jet(&p, &phi_jet).value() - want_z1).norm());
        worst = worst.max((phi_jet.deriv(Axis::T).value() - want_t).norm());
    }
    worst
}

pub fn blowup_inversion_check(a: f64) -> Result<InversionReport> {
    let model = AFModel::new(a);
    let rho_min = model.rho0.max(2.0);
    let af = af_coframe(&model);
    let closed = af_connection_closed_form(&model);
    let rotated = PHStructure::new(inverted_blowup(a, true, rho_min));
    let plain = PHStructure::new(inverted_blowup(a, false, rho_min));
    let (omega_rot, _) = rotated.connection_torsion();
    let (omega_plain, _) = plain.connection_torsion();

    let (mut theta_rel, mut theta1_rel, mut omega_gap) = (Vec::new(), Vec::new(), Vec::new());
    let mut rotation_residual = 0.0f64;
    for &rho in &CHECK_RADII {
        let (mut t0, mut t1, mut om) = (0.0f64, 0.0f64, 0.0f64);
        for &(alpha, phi) in &DIRECTIONS {
            let p = polar_point(rho, alpha, phi);
            let (inv, want) = (rotated.coframe().jets(&p, 0)?, af.jets(&p, 0)?);
            let (g, s) = max_gap(&inv.theta, &want.theta);
            t0 = t0.max(g / s);
            let (g, s) = max_gap(&inv.theta1, &want.theta1);
            t1 = t1.max(g / s);
            let (g, _) = max_gap(&omega_rot.real_jets(&p, 0)?, &closed.real_jets(&p, 0)?);
            om = om.max(g);

            let map = uninvert_jets(&p, 1);
            let u = rotation_jet(&map);
            let dlog = [Axis::X, Axis::Y, Axis::T].map(|ax| u.deriv(ax).value() / u.value());
            let (wr, wp) = (omega_rot.real_jets(&p, 0)?, omega_plain.real_jets(&p, 0)?);
            for i in 0..3 {
                rotation_residual = rotation_residual.max((wr[i].value() - wp[i].value() + dlog[i]).norm());
            }
        }
        theta_rel.push(t0);
        theta1_rel.push(t1);
        omega_gap.push(om);
    }
    let omega_slope = if omega_gap.iter().all(|&g| g < 1e-300) {
        f64::NEG_INFINITY
    } else {
        log_log_slope(&CHECK_RADII, &omega_gap)
    };
    Ok(InversionReport {
        rho_star: CHECK_RADII.to_vec(),
        theta_rel,
        theta1_rel,
        omega_gap,
        omega_slope,
        rotation_residual,
        dphi_residual: dphi_residual(),
    })
}
