//! `S2 x S1` as the quotient of `H1 \ {0}` by the dilation `(z, t) -> (2z, 4t)`,
//! with the invariant contact form `rho^-2 theta0`.
//!
//! The sampling of the Paneitz form below is evidence only: the
//! non-negativity on the quotient is a limit over ever longer cut-offs, and a
//! finite quadrature cannot prove it.

use conformal_deform::conformal_change;
use heisenberg_core::quad::{weighted_sum, ShellRule};
use heisenberg_core::{dilate, gauge_rho, Complex64, Coords, Domain, Error, HPoint, Jet, Result, ScalarField};
use ph_calculus::ops::paneitz_jet;
use ph_calculus::{Local, PHStructure};

/// `theta = rho^-2 theta0` with `theta1 = rho^-1 (sqrt 2 dz + 2i f,_1bar theta0)`, `f = -log rho`.
pub fn s2s1_structure() -> PHStructure {
    let f = ScalarField::closed_form("-log rho", Domain::rho_positive(), |c| c.rho().ln().scale(-1.0));
    conformal_change(&PHStructure::flat(), &f)
}

/// Generator of the deck group.
pub fn dyadic(p: &HPoint) -> HPoint {
    dilate(2.0, p).expect("dilation by 2")
}

/// `(i/2) zbar^2 (|z|^2 + it)^2 rho^-6`, the torsion the structure equations give.
pub fn s2s1_torsion(p: &HPoint) -> Complex64 {
    let w = Complex64::new(p.r2(), p.t);
    let zb = p.z().conj();
    0.5 * Complex64::i() * zb * zb * w * w / gauge_rho(p).powi(6)
}

/// The closed form `i |z|^2 (|z|^2 + it)^2 rho^-6` used as the reference in
/// the torsion check.
pub fn s2s1_torsion_reference(p: &HPoint) -> Complex64 {
    let w = Complex64::new(p.r2(), p.t);
    Complex64::i() * p.r2() * w * w / gauge_rho(p).powi(6)
}

/// Largest `|F(2z, 4t) - F(z, t)|` over `points` for each field; the frame
/// is invariant, so torsion, curvature and every other scalar built from the
/// structure must be as well.
pub fn periodicity_residual(fields: &[ScalarField], points: &[HPoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for f in fields {
        for p in points {
            let (a, b) = (f.value(p)?, f.value(&dyadic(p))?);
            worst = worst.max((a - b).norm() / a.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// `(1/n) int phi~ P phi~ theta ^ d theta` over `1 <= rho <= 2^n` for each
/// `n = 1..=n_max`, with `phi~ = eta_n phi` and `eta_n` switching on over
/// the first half period and off over the last.
#[derive(Clone, Debug, PartialEq)]
pub struct PaneitzSampling {
    /// Per-`n` values.
    pub values: Vec<f64>,
    /// `int_{1 <= rho <= 2} phi P phi theta ^ d theta`: the form on the quotient.
    pub period: f64,
    /// `int_{1 <= rho <= 2} phi^2 theta ^ d theta`
    pub norm_sq: f64,
    /// `n (values[n] - period)`, the same for every `n` up to quadrature:
    /// the contribution of the two cut-off regions.
    pub boundary: f64,
}

impl PaneitzSampling {
    /// Largest deviation of `n v_n - (n-1) v_{n-1}` from `period`.
    pub fn increment_defect(&self) -> f64 {
        let v = &self.values;
        (1..v.len())
            .map(|i| {
                let n = (i + 1) as f64;
                (n * v[i] - (n - 1.0) * v[i - 1] - self.period).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `1` on `s >= 1`, `0` on `s <= 0`, C-infinity in between, as a jet.
fn step_jet(s: &Jet) -> Jet {
    let v = s.value().re;
    if v <= 0.0 {
        return Jet::zero(s.order());
    }
    if v >= 1.0 {
        return Jet::constant(s.order(), 1.0);
    }
    let a = s.recip().scale(-1.0).exp();
    let b = s.scale(-1.0).add_const(1.0).recip().scale(-1.0).exp();
    &a * &(&a + &b).recip()
}

/// `eta_n` as a function of `s = log2 rho`: rises on `[0, 1/2]`, falls on `[n - 1/2, n]`.
fn cutoff_jet(n: usize, c: &Coords) -> Jet {
    let s = c.rho().ln().scale(1.0 / std::f64::consts::LN_2);
    let up = step_jet(&s.scale(2.0));
    let down = step_jet(&s.scale(-2.0).add_const(2.0 * n as f64));
    &up * &down
}

fn check_periodic(phi: &ScalarField) -> Result<()> {
    for p in heisenberg_core::sample::sample_points(404, 8, 1.0, 2.0, 0.05) {
        let (a, b) = (phi.value(&p)?, phi.value(&dyadic(&p))?);
        if (a - b).norm() > 1e-10 * a.norm().max(1.0) {
            return Err(Error::InvalidArgument(format!("{} is not invariant under (z, t) -> (2z, 4t) at {p}", phi.name())));
        }
    }
    Ok(())
}

/// Half-octave shells `2^(k/2) <= rho <= 2^((k+1)/2)` with `theta ^ d theta` weights.
fn half_octaves(st: &PHStructure, from: usize, to: usize, rule: &ShellRule) -> Result<Vec<(HPoint, f64)>> {
    let mut nodes = Vec::new();
    for k in from..to {
        let (a, b) = (2f64.powf(k as f64 / 2.0), 2f64.powf((k + 1) as f64 / 2.0));
        for (p, w) in heisenberg_core::quad::shell_nodes(a, b, rule)? {
            let vol = st.local(&p, 2)?.volume_density();
            // shell weights are for dW = 4 dx dy dt
            nodes.push((p, w * vol / 4.0));
        }
    }
    Ok(nodes)
}

fn pform_integral(st: &PHStructure, u: &ScalarField, nodes: &[(HPoint, f64)]) -> Result<(f64, f64)> {
    let cf = st.coframe().clone();
    let v = weighted_sum(nodes, |p| {
        let loc = Local::new(&cf, p, 5)?;
        let uj = u.jet(p, 4)?.re();
        let pu = paneitz_jet(&loc, &uj).value();
        let val = uj.value().re;
        Ok(Complex64::new((pu * val).re, val * val))
    })?;
    Ok((v.re, v.im))
}

/// `(int phi P phi, int phi^2)` over one period `1 <= rho <= 2`, both against `theta ^ d theta`.
pub fn s2s1_paneitz_period(phi: &ScalarField, rule: &ShellRule) -> Result<(f64, f64)> {
    check_periodic(phi)?;
    let st = s2s1_structure();
    pform_integral(&st, phi, &half_octaves(&st, 0, 2, rule)?)
}

pub fn s2s1_paneitz_sampling(phi: &ScalarField, n_max: usize, rule: &ShellRule) -> Result<PaneitzSampling> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("need at least one period".into()));
    }
    let (period, norm_sq) = s2s1_paneitz_period(phi, rule)?;
    let st = s2s1_structure();
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let base = phi.clone();
        let cut = ScalarField::from_jet_fn("eta phi", Domain::rho_positive(), move |p, k| {
            Ok(&cutoff_jet(n, &Coords::new(p, k)) * &base.jet(p, k)?)
        });
        let (v, _) = pform_integral(&st, &cut, &half_octaves(&st, 0, 2 * n, rule)?)?;
        values.push(v / n as f64);
    }
    let boundary = values[n_max - 1] * n_max as f64 - period * n_max as f64;
    Ok(PaneitzSampling { values, period, norm_sq, boundary })
}
