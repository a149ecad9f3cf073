//! The unit sphere `S3` in `C2` with the contact form
//! `i (dbar - d)(|z1|^2 + |z2|^2)`, the Cayley transform and the Green
//! function of the conformal sublaplacian with pole at `(0, 1)`.
//!
//! The structure lives on the chart `H1 -> S3 \ {(0, -1)}` inverse to the
//! Cayley transform:
//! `z1 = 2z / (1 + |z|^2 - it)`, `z2 = (1 - |z|^2 + it) / (1 + |z|^2 - it)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use conformal_deform::{paneitz_qform_variations, DeformationField, QformVariations};
use heisenberg_core::quad::{shell_nodes, ShellRule};
use heisenberg_core::{Axis, Complex64, Coords, Domain, Error, HPoint, Jet, Result, ScalarField};
use ph_calculus::{Coframe, CoframeJets, PHStructure};

/// Allowed drift of `|z1|^2 + |z2|^2` from 1.
pub const SPHERE_TOL: f64 = 1e-12;

/// A point of `S3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl SpherePoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let n = z1.norm_sqr() + z2.norm_sqr();
        if !((n - 1.0).abs() < SPHERE_TOL) {
            return Err(Error::InvalidArgument(format!("|z1|^2 + |z2|^2 = {n}, not on the unit sphere")));
        }
        Ok(SpherePoint { z1, z2 })
    }

    /// The pole of the Cayley chart.
    pub fn south() -> Self {
        SpherePoint { z1: Complex64::new(0.0, 0.0), z2: Complex64::new(-1.0, 0.0) }
    }

    /// The image of the origin of `H1`, where the Green function has its pole.
    pub fn north() -> Self {
        SpherePoint { z1: Complex64::new(0.0, 0.0), z2: Complex64::new(1.0, 0.0) }
    }

    pub fn norm_deviation(&self) -> f64 {
        (self.z1.norm_sqr() + self.z2.norm_sqr() - 1.0).abs()
    }
}

/// The chart `H1 -> S3` inverse to [`cayley`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SphereChart;

impl SphereChart {
    pub fn point(&self, p: &HPoint) -> SpherePoint {
        let j = self.jets(p, 0);
        SpherePoint { z1: j[0].value(), z2: j[1].value() }
    }

    /// Jets of the embedding `(z1, z2)` at `p`.
    pub fn jets(&self, p: &HPoint, order: usize) -> [Jet; 2] {
        let c = Coords::new(p, order);
        let r2 = c.r2();
        let it = c.t.scale(Complex64::i());
        let den = (&r2 - &it).add_const(1.0).recip();
        let z1 = (&c.z() * &den).scale(2.0);
        let z2 = &(&it - &r2).add_const(1.0) * &den;
        [z1, z2]
    }

    /// `H1` coordinates of a sphere point other than the chart pole.
    pub fn coords(&self, q: &SpherePoint) -> Result<HPoint> {
        cayley(q)
    }

    /// Coframe `theta = i sum (z_j dzbar_j - zbar_j dz_j)`,
    /// `theta1 = sqrt 2 (z2 dz1 - z1 dz2)` pulled back by the chart. The
    /// frame dual to it has `Z1 = (zbar2 d_z1 - zbar1 d_z2) / sqrt 2`.
    pub fn coframe(&self) -> Coframe {
        let chart = *self;
        Coframe::new("sphere", Domain::everywhere(), move |p, k| {
            let z = chart.jets(p, k + 1);
            let dz: [[Jet; 3]; 2] = std::array::from_fn(|j| Axis::ALL.map(|a| z[j].deriv(a)));
            let zk: [Jet; 2] = std::array::from_fn(|j| z[j].truncate(k));
            let i = Complex64::i();
            let theta = std::array::from_fn(|a| {
                let mut acc = Jet::zero(k);
                for j in 0..2 {
                    acc += &(&zk[j] * &dz[j][a].conj());
                    acc += &(-(&zk[j].conj() * &dz[j][a]));
                }
                acc.scale(i)
            });
            let theta1 = std::array::from_fn(|a| (&(&zk[1] * &dz[0][a]) - &(&zk[0] * &dz[1][a])).scale(SQRT_2));
            Ok(CoframeJets { theta, theta1 })
        })
    }

    /// `z1` or `z2` (`which` = 0 or 1) as a field on the chart.
    pub fn coordinate(&self, which: usize) -> ScalarField {
        let chart = *self;
        let name = if which == 0 { "z1" } else { "z2" };
        ScalarField::from_jet_fn(name, Domain::everywhere(), move |p, k| Ok(chart.jets(p, k)[which].clone()))
    }
}

/// The sphere with the standard contact form, on the Cayley chart.
pub fn sphere_structure() -> PHStructure {
    PHStructure::new(SphereChart.coframe())
}

/// `psi = z1 + zbar1`, a CR-pluriharmonic function on the sphere.
pub fn sphere_psi() -> ScalarField {
    let z1 = SphereChart.coordinate(0);
    z1.add(&z1.conj()).renamed("z1 + zbar1")
}

/// Closed forms of `psi,_1`, `psi,_11`, `psi,_{1 1bar}`, `psi,_{1bar 1bar}`
/// for [`sphere_psi`].
pub fn sphere_psi_derivatives(q: &SpherePoint) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    [q.z2.conj() * FRAC_1_SQRT_2, zero, -q.z1 * 0.5, zero]
}

/// Weighted nodes for `int f theta ^ d theta` over the sphere: dyadic shells
/// `2^k <= rho <= 2^(k+1)`, `|k| < levels`, of the chart. The missing
/// neighbourhoods of the two poles have volume `O(4^-levels)`.
pub fn sphere_nodes(rule: &ShellRule, levels: i32) -> Result<Vec<(HPoint, f64)>> {
    let st = sphere_structure();
    let mut nodes = Vec::new();
    for k in -levels..levels {
        for (p, w) in shell_nodes(2f64.powi(k), 2f64.powi(k + 1), rule)? {
            let vol = st.local(&p, 2)?.volume_density();
            // shell weights are for dW = 4 dx dy dt
            nodes.push((p, w * vol / 4.0));
        }
    }
    Ok(nodes)
}

/// Variations of `(P_(s) psi, psi)` on the sphere for `psi = z1 + zbar1`
/// along the deformation `E_11 = 1`.
pub fn sphere_paneitz_variations(rule: &ShellRule, levels: i32) -> Result<QformVariations> {
    let nodes = sphere_nodes(rule, levels)?;
    let e = DeformationField::new(ScalarField::constant(1.0));
    paneitz_qform_variations(&sphere_structure(), &e, &sphere_psi(), &nodes)
}

fn pole_distance(q: &SpherePoint) -> f64 {
    (q.z2 + 1.0).norm()
}

/// The Cayley transform `(z1, z2) -> (z1 / (1 + z2), Re(i (1 - z2) / (1 + z2)))`.
pub fn cayley(q: &SpherePoint) -> Result<HPoint> {
    if pole_distance(q) < 1e-300 || q.norm_deviation() >= SPHERE_TOL {
        return Err(Error::InvalidArgument(format!("Cayley transform undefined at ({}, {})", q.z1, q.z2)));
    }
    let den = 1.0 + q.z2;
    let z = q.z1 / den;
    let t = (Complex64::i() * (1.0 - q.z2) / den).re;
    Ok(HPoint::from_zt(z, t))
}

/// `G = (1/pi) ((1 + z2)(1 + zbar2) / (|z1|^4 - (z2 - zbar2)^2))^{1/2}`.
///
/// Singular at `(0, 1)`, the image of the origin of `H1`, where it grows
/// like `rho^-2 / (2 pi)` in the Cayley chart; at `(0, -1)` both factors
/// vanish and the point is rejected.
pub fn sphere_green(q: &SpherePoint) -> Result<f64> {
    if q.norm_deviation() >= SPHERE_TOL {
        return Err(Error::InvalidArgument(format!("({}, {}) is not on the unit sphere", q.z1, q.z2)));
    }
    let num = (1.0 + q.z2).norm_sqr();
    let d = q.z2 - q.z2.conj();
    let den = (q.z1.norm_sqr().powi(2) - d * d).re;
    if num == 0.0 || den <= 0.0 {
        let what = if num == 0.0 { "Green function (chart pole)" } else { "Green function (pole)" };
        return Err(Error::Singular { what, point: HPoint::from_zt(q.z1, q.z2.re) });
    }
    Ok((num / den).sqrt() / PI)
}

/// [`sphere_green`] in the Cayley chart: `sqrt((1 + |z|^2)^2 + t^2) / (2 pi rho^2)`.
pub fn sphere_green_field() -> ScalarField {
    ScalarField::closed_form("G_p", Domain::rho_positive(), |c| {
        let a = c.r2().add_const(1.0);
        let d = &(&a * &a) + &(&c.t * &c.t);
        (&d.sqrt() * &c.rho2().recip()).scale(0.5 / PI)
    })
}
