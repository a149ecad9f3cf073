//! `(h * k)(Z) = int h(W) k(W^-1 Z) dW` by a smooth near/far split.
//!
//! A radial partition `psi(rho(U) / delta)` with `U = W^-1 Z` separates the
//! kernel singularity from the rest. The near part is integrated in polar
//! coordinates centred at the singularity, refining dyadically towards it;
//! the far part in polar coordinates centred where `h` concentrates, in
//! dyadic shells out to `P_max` plus a geometric tail.

use std::f64::consts::FRAC_PI_2;

use heisenberg_core::quad::{gauss_legendre, geometric_tail, periodic_nodes, polar_point, weighted_sum, Estimate, ShellRule};
use heisenberg_core::{gauge_rho, group_inv, group_mul, Complex64, Error, HPoint, Result, ScalarField};

use crate::kernel::ConvKernel;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Near-field radius `delta`, as a fraction of the working scale `L`.
    pub near_radius: f64,
    /// Far-field truncation `P_max`, as a fraction of `L`.
    pub far_radius: f64,
    /// Dyadic levels between the near-field radius and the innermost ball.
    pub refinement: usize,
    pub near: ShellRule,
    pub far: ShellRule,
    /// Centre of the far-field shells; put it where `h` concentrates.
    pub center: HPoint,
    /// Length scale of `h`. `L = max(rho(center^-1 Z), h_scale)`.
    pub h_scale: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            near_radius: 0.5,
            far_radius: 64.0,
            refinement: 10,
            near: ShellRule { n_rho: 12, n_alpha: 24, n_phi: 24 },
            far: ShellRule { n_rho: 12, n_alpha: 48, n_phi: 64 },
            center: HPoint::ORIGIN,
            h_scale: 1.0,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.near_radius > 0.0) {
            return Err(Error::InvalidArgument(format!("near radius must be positive, got {}", self.near_radius)));
        }
        if !(self.far_radius > self.near_radius) {
            return Err(Error::InvalidArgument(format!(
                "far radius {} must exceed the near radius {}",
                self.far_radius, self.near_radius
            )));
        }
        if !(self.h_scale > 0.0) {
            return Err(Error::InvalidArgument(format!("h scale must be positive, got {}", self.h_scale)));
        }
        for r in [&self.near, &self.far] {
            if r.n_rho == 0 || r.n_alpha == 0 || r.n_phi == 0 {
                return Err(Error::InvalidArgument("node counts must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn centered_at(mut self, center: HPoint, h_scale: f64) -> Self {
        self.center = center;
        self.h_scale = h_scale;
        self
    }

    fn coarse(&self) -> Self {
        let half = |r: ShellRule| ShellRule { n_rho: r.n_rho, n_alpha: r.n_alpha.div_ceil(2), n_phi: r.n_phi.div_ceil(2) };
        QuadConfig { near: half(self.near), far: half(self.far), ..*self }
    }
}

/// Near-field weight `exp(-s^8)`, an entire function of the coordinates
/// since `rho^4 = |z|^4 + t^2`. Its complement vanishes to eighth order at
/// the kernel singularity, which keeps the far-field integrand flat there
/// even for the sharply peaked `eta_eps^-2`.
fn partition(s: f64) -> f64 {
    (-s.powi(8)).exp()
}

/// `exp(-s^8) < 1e-300` beyond this.
const NEAR_CUTOFF: f64 = 2.5;

fn angular(rule: &ShellRule) -> Vec<((f64, f64), f64)> {
    let alphas = gauss_legendre(-FRAC_PI_2, FRAC_PI_2, rule.n_alpha);
    let phis = periodic_nodes(rule.n_phi);
    alphas.iter().flat_map(|&(a, wa)| phis.iter().map(move |&(p, wp)| ((a, p), wa * wp))).collect()
}

/// Nodes of `int dU` over `rho_a <= rho(U) <= rho_b`; `rho_a = 0` selects
/// Gauss-Legendre in `rho`, otherwise in `log rho`.
fn ball_nodes(rho_a: f64, rho_b: f64, rule: &ShellRule) -> Vec<(HPoint, f64)> {
    let radial: Vec<(f64, f64)> = if rho_a == 0.0 {
        gauss_legendre(0.0, rho_b, rule.n_rho).into_iter().map(|(r, w)| (r, 4.0 * r.powi(3) * w)).collect()
    } else {
        gauss_legendre(rho_a.ln(), rho_b.ln(), rule.n_rho)
            .into_iter()
            .map(|(s, w)| (s.exp(), 4.0 * s.exp().powi(4) * w))
            .collect()
    };
    let ang = angular(rule);
    let mut out = Vec::with_capacity(radial.len() * ang.len());
    for &(r, wr) in &radial {
        for &((a, phi), wa) in &ang {
            out.push((polar_point(r, a, phi), wr * wa));
        }
    }
    out
}

/// `0, r_in, 2 r_in, ...` up to the first radius `>= r_out`; the first cell
/// is a ball.
fn dyadic_edges(r_in: f64, r_out: f64) -> Vec<f64> {
    let mut edges = vec![0.0, r_in];
    while edges[edges.len() - 1] < r_out * (1.0 - 1e-12) {
        edges.push(2.0 * edges[edges.len() - 1]);
    }
    edges
}

fn convolve_once(h: &ScalarField, k: &ConvKernel, z: &HPoint, cfg: &QuadConfig) -> Result<Estimate> {
    let to_z = group_mul(&group_inv(&cfg.center), z);
    let scale = gauge_rho(&to_z).max(cfg.h_scale);
    let delta = cfg.near_radius * scale;

    // near field: W = Z U^-1
    let mut inner = delta / 2f64.powi(cfg.refinement as i32);
    while inner > 0.25 * k.inner_scale() {
        inner *= 0.5;
    }
    let near_edges = dyadic_edges(inner, NEAR_CUTOFF * delta);
    let near_f = |u: &HPoint| -> Result<Complex64> {
        let w = partition(gauge_rho(u) / delta);
        Ok(h.value(&group_mul(z, &group_inv(u)))? * k.eval(u)? * w)
    };
    let mut near = Complex64::new(0.0, 0.0);
    for pair in near_edges.windows(2) {
        near += weighted_sum(&ball_nodes(pair[0], pair[1], &cfg.near), near_f)?;
    }

    // far field: W = C V
    let far_f = |v: &HPoint| -> Result<Complex64> {
        let w = group_mul(&cfg.center, v);
        let u = group_mul(&group_inv(&w), z);
        let cut = -(-(gauge_rho(&u) / delta).powi(8)).exp_m1();
        if cut == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let hv = h.value(&w)?;
        if hv == Complex64::new(0.0, 0.0) {
            return Ok(hv);
        }
        Ok(hv * k.eval(&u)? * cut)
    };
    // edges at h_scale 2^j, so a support boundary at h_scale is a cell boundary
    let r0 = cfg.h_scale / 64.0;
    let far_edges = dyadic_edges(r0, cfg.far_radius * scale);
    let mut far = Complex64::new(0.0, 0.0);
    let mut shells = Vec::new();
    for pair in far_edges.windows(2) {
        let s = weighted_sum(&ball_nodes(pair[0], pair[1], &cfg.far), far_f)?;
        far += s;
        shells.push(s);
    }
    let (tail, tail_err) = geometric_tail(&shells)
        .map_err(|e| Error::Quadrature(format!("far field of `{}` * {}: {e}", h.name(), k.name())))?;
    Ok(Estimate { value: near + far + tail, error: tail_err })
}

/// `(h * k)(Z) = int h(W) k(W^-1 Z) dW` with `dW = theta0 ^ d theta0`.
///
/// The error estimate adds the tail extrapolation error to the change under
/// halving the angular node counts.
pub fn convolve(h: &ScalarField, k: &ConvKernel, z: &HPoint, cfg: &QuadConfig) -> Result<Estimate> {
    cfg.validate()?;
    let fine = convolve_once(h, k, z, cfg)?;
    let coarse = convolve_once(h, k, z, &cfg.coarse())?;
    Ok(Estimate { value: fine.value, error: fine.error + (fine.value - coarse.value).norm() })
}
