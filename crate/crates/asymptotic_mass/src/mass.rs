//! The p-mass `m = lim i oint_{rho = Lambda} omega ^ theta`.

use heisenberg_core::quad::{wedge_on, SurfaceChart};
use heisenberg_core::{Error, Result};
use ph_calculus::PHStructure;

use crate::fit_inverse;

pub const DEFAULT_SCHEDULE: [f64; 3] = [10.0, 20.0, 40.0];

/// Surface grid used by [`pmass`]; the model integrands are low-order
/// trigonometric in `phi`.
const GRID: (usize, usize) = (32, 32);

#[derive(Clone, Debug, PartialEq)]
pub struct PMass {
    /// `(Lambda, i oint_{S_Lambda} omega ^ theta)`
    pub per_radius: Vec<(f64, f64)>,
    /// Extrapolated limit of the fit `m(Lambda) = m + c / Lambda`.
    pub value: f64,
    /// Fit residual plus the spread between full and last-pair extrapolation.
    pub error: f64,
}

/// `i oint_{S_Lambda} omega ^ theta` over the given chart; the imaginary
/// part is returned as a second component for diagnostics.
pub fn mass_on_sphere(st: &PHStructure, chart: &SurfaceChart) -> Result<(f64, f64)> {
    let (omega, _) = st.connection_torsion();
    let theta = st.coframe().theta();
    let v = chart.integrate(|n| {
        let om = omega.real_jets(&n.point, 0)?.map(|j| j.value());
        let th = theta.real_jets(&n.point, 0)?.map(|j| j.value());
        Ok(wedge_on(om, th, &n.d_phi, &n.d_alpha) * heisenberg_core::Complex64::i())
    })?;
    Ok((v.re, v.im))
}

pub fn pmass(st: &PHStructure, schedule: &[f64]) -> Result<PMass> {
    pmass_with(st, schedule, GRID.0, GRID.1)
}

pub fn pmass_with(st: &PHStructure, schedule: &[f64], n_phi: usize, n_alpha: usize) -> Result<PMass> {
    if schedule.len() < 2 {
        return Err(Error::InvalidArgument("the p-mass schedule needs at least two radii".into()));
    }
    let mut per_radius = Vec::with_capacity(schedule.len());
    for &lambda in schedule {
        let (m, _) = mass_on_sphere(st, &SurfaceChart::new(lambda, n_phi, n_alpha))?;
        if !m.is_finite() {
            return Err(Error::Quadrature(format!("non-finite mass integral at Lambda = {lambda}")));
        }
        per_radius.push((lambda, m));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = per_radius.iter().copied().unzip();
    let (value, _, residual) = fit_inverse(&xs, &ys);
    let n = xs.len();
    let (last, _, _) = fit_inverse(&xs[n - 2..], &ys[n - 2..]);
    let error = residual + (value - last).abs();
    let scale = ys.iter().fold(0.0f64, |a, y| a.max(y.abs()));
    if residual > 1e-2 * scale + 1e-9 {
        return Err(Error::Quadrature(format!(
            "mass integrals {ys:?} do not follow m + c/Lambda; the structure does not look asymptotically flat"
        )));
    }
    Ok(PMass { per_radius, value, error })
}
