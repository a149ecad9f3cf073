//! Leading behaviour of `Box_b zbar` on the model end.

use std::f64::consts::PI;

use heisenberg_core::quad::polar_point;
use heisenberg_core::{Complex64, Domain, Error, HPoint, Result, ScalarField};
use nalgebra::{DMatrix, DVector};

use crate::log_log_slope;
use crate::model::{af_structure, AFModel};

pub const FIT_RADII: [f64; 3] = [10.0, 20.0, 40.0];

const DIRECTIONS: [(f64, f64); 8] =
    [(-1.1, 0.2), (-0.6, 2.0), (-0.2, 4.1), (0.0, 1.0), (0.3, 5.5), (0.7, 3.3), (1.0, 0.9), (1.3, 2.7)];

#[derive(Clone, Debug, PartialEq)]
pub struct BoxFit {
    /// Coefficient `c` of `c zbar (|z|^2 + it) rho^-6`, extrapolated from the
    /// per-sphere values by a polynomial in `rho^-2` through all radii.
    pub coefficient: f64,
    /// Log-log slope of `max |Box_b zbar - 4 pi A zbar (|z|^2 + it) rho^-6|`
    /// over the fit radii (`-inf` when the remainder vanishes identically).
    pub remainder_slope: f64,
    /// `(rho, fitted coefficient on that sphere, max remainder)`
    pub per_radius: Vec<(f64, f64, f64)>,
}

fn leading_shape(p: &HPoint) -> Complex64 {
    let rho2 = (p.r2() * p.r2() + p.t * p.t).sqrt();
    p.z().conj() * Complex64::new(p.r2(), p.t) / rho2.powi(3)
}

/// Evaluates `Box_b zbar` on the model structure on spheres of radius
/// [`FIT_RADII`] and fits the coefficient of the leading shape on each sphere.
/// The per-sphere values approach the limit like `rho^-2` (the metric factor
/// `1 + 4 pi A rho^-2`), so the extrapolation is in `rho^-2`.
pub fn box_b_zbar_expansion(m: &AFModel) -> Result<BoxFit> {
    let st = af_structure(m);
    let zbar = ScalarField::closed_form("zbar", Domain::everywhere(), |c| c.zbar());
    let boxed = st.kohn_box(&zbar);
    let expected = 4.0 * PI * m.a;
    let mut per_radius = Vec::new();
    for &rho in &FIT_RADII {
        let (mut num, mut den, mut worst) = (Complex64::new(0.0, 0.0), 0.0, 0.0f64);
        for &(a, phi) in &DIRECTIONS {
            let p = polar_point(rho, a, phi);
            let (val, shape) = (boxed.value(&p)?, leading_shape(&p));
            num += shape.conj() * val;
            den += shape.norm_sqr();
            worst = worst.max((val - shape * expected).norm());
        }
        per_radius.push((rho, (num / den).re, worst));
    }
    let (rs, cs): (Vec<f64>, Vec<f64>) = per_radius.iter().map(|&(r, c, _)| (r, c)).unzip();
    let coefficient = extrapolate_in_inverse_square(&rs, &cs)?;
    if !coefficient.is_finite() {
        return Err(Error::Quadrature("Box_b zbar coefficient fit is not finite".into()));
    }
    let rems: Vec<f64> = per_radius.iter().map(|&(_, _, w)| w).collect();
    let remainder_slope = if rems.iter().all(|&w| w < 1e-300) {
        f64::NEG_INFINITY
    } else {
        log_log_slope(&rs, &rems)
    };
    Ok(BoxFit { coefficient, remainder_slope, per_radius })
}

/// Value at `rho = inf` of the polynomial in `rho^-2` through `(rs, cs)`.
fn extrapolate_in_inverse_square(rs: &[f64], cs: &[f64]) -> Result<f64> {
    let n = rs.len();
    let vander = DMatrix::from_fn(n, n, |i, j| rs[i].powi(-2 * j as i32));
    let coef = vander
        .lu()
        .solve(&DVector::from_column_slice(cs))
        .ok_or_else(|| Error::Quadrature("degenerate fit radii".into()))?;
    Ok(coef[0])
}
