//! The residual suite every derived structure must pass.

use heisenberg_core::{Error, HPoint, Result, ScalarField};

use crate::ops::{commutation_jet, PHStructure};

/// Largest residuals over a set of sample points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidualReport {
    pub points: usize,
    pub duality: f64,
    /// `d theta - i theta1 ^ theta1bar`
    pub admissibility: f64,
    /// `d theta1 - theta1 ^ omega - A theta ^ theta1bar`, including the
    /// imaginary part of the fitted Reeb coefficient
    pub structure: f64,
    /// `|Im R|`
    pub curvature_reality: f64,
    /// Worst of the three commutation relations over all test tensors,
    /// relative to the size of the tensor's 2-jet when that exceeds one.
    pub commutation: f64,
}

impl ResidualReport {
    pub fn worst(&self) -> f64 {
        [self.duality, self.admissibility, self.structure, self.curvature_reality, self.commutation]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Lowest local jet order at which every residual of the suite is defined.
pub const MIN_RESIDUAL_ORDER: usize = 4;

/// Runs the suite at `points` with tensors `(c, k)` for the commutation test.
pub fn residual_report(st: &PHStructure, points: &[HPoint], tensors: &[(ScalarField, i32)]) -> Result<ResidualReport> {
    residual_report_at(st, points, tensors, MIN_RESIDUAL_ORDER)
}

/// [`residual_report`] with the local expansions carried to jet order `order`.
pub fn residual_report_at(
    st: &PHStructure,
    points: &[HPoint],
    tensors: &[(ScalarField, i32)],
    order: usize,
) -> Result<ResidualReport> {
    if order < MIN_RESIDUAL_ORDER {
        return Err(Error::InvalidArgument(format!("residual suite needs jet order >= {MIN_RESIDUAL_ORDER}, got {order}")));
    }
    let mut rep = ResidualReport { points: points.len(), ..Default::default() };
    for p in points {
        let loc = st.local(p, order)?;
        rep.duality = rep.duality.max(loc.duality_residual());
        let (adm, se) = loc.structure_residuals();
        rep.admissibility = rep.admissibility.max(adm);
        rep.structure = rep.structure.max(se).max(loc.b_imag.value().norm());
        rep.curvature_reality = rep.curvature_reality.max(loc.r.value().im.abs());
        for (c, k) in tensors {
            let cj = c.jet(p, 2)?;
            let scale = cj.max_abs().max(1.0);
            for r in commutation_jet(&loc, &cj, *k) {
                rep.commutation = rep.commutation.max(r.value().norm() / scale);
            }
        }
    }
    Ok(rep)
}
