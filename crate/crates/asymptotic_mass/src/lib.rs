//! Asymptotically flat ends modelled on `H1` minus a gauge ball: the model
//! coframe with mass parameter `A`, the p-mass `i oint omega ^ theta` at
//! infinity, and the closed-form boundary integrals that surround it.

pub mod boundary;
pub mod expansion;
pub mod inversion;
pub mod mass;
pub mod model;

pub use boundary::{
    beta_1bar_model, beta_minus1_third,
    boundary_i43, boundary_i43_on, boundary_i44, boundary_i44_on, flux_rho_inv_sq, flux_rho_inv_sq_on,
    paneitz_boundary, paneitz_boundary_on, phi_t_integral, BOUNDARY_CHART,
};
pub use expansion::{box_b_zbar_expansion, BoxFit};
pub use heisenberg_core::quad::SurfaceChart;
pub use inversion::{blowup_inversion_check, inverted_blowup, InversionReport};
pub use mass::{mass_on_sphere, pmass, pmass_with, PMass, DEFAULT_SCHEDULE};
pub use model::{af_coframe, af_connection_closed_form, af_structure, AFModel};

/// Least-squares slope of `log y` against `log x`.
pub(crate) fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Least-squares fit `y = c0 + c1 / x`; returns `(c0, c1, max residual)`.
pub(crate) fn fit_inverse(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let us: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
    let (mu, my) = (us.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = us.iter().zip(ys).map(|(u, y)| (u - mu) * (y - my)).sum();
    let den: f64 = us.iter().map(|u| (u - mu).powi(2)).sum();
    let c1 = if den > 0.0 { num / den } else { 0.0 };
    let c0 = my - c1 * mu;
    let res = us.iter().zip(ys).map(|(u, y)| (y - c0 - c1 * u).abs()).fold(0.0, f64::max);
    (c0, c1, res)
}
