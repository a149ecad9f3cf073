//! `S h = lim (1/4 pi^2) h * eta_eps^-2`, taken by extrapolation in `eps`.

use std::f64::consts::PI;

use heisenberg_core::quad::{polar_point, Estimate};
use heisenberg_core::{Complex64, Error, HPoint, Result, ScalarField};

use crate::convolution::{convolve, QuadConfig};
use crate::kernel::ConvKernel;
use crate::source::{cut_source_field, source_f};

pub const DEFAULT_EPS: [f64; 3] = [0.2, 0.1, 0.05];

/// Value at `0` of the polynomial through `(xs, ys)` (Neville).
fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// `(1/4 pi^2) h * eta_eps^-2` at each `eps` of `schedule`.
pub fn szego_approximants(h: &ScalarField, z: &HPoint, schedule: &[f64], cfg: &QuadConfig) -> Result<Vec<Estimate>> {
    schedule
        .iter()
        .map(|&eps| {
            let e = convolve(h, &ConvKernel::eta(eps)?, z, cfg)?;
            let s = 1.0 / (4.0 * PI * PI);
            Ok(Estimate { value: e.value * s, error: e.error * s })
        })
        .collect()
}

/// `S h (Z)` by polynomial extrapolation to `eps = 0` through all of
/// `schedule`, which must be positive and strictly decreasing.
///
/// The error adds the quadrature errors to the gap against the extrapolant
/// that drops the largest `eps`. Fails when the approximants move further
/// apart as `eps` shrinks.
pub fn szego_apply(h: &ScalarField, z: &HPoint, schedule: &[f64], cfg: &QuadConfig) -> Result<Estimate> {
    if schedule.len() < 2 {
        return Err(Error::InvalidArgument("eps schedule needs at least two values".into()));
    }
    if !schedule.windows(2).all(|w| w[1] < w[0]) || !(schedule[schedule.len() - 1] > 0.0) {
        return Err(Error::InvalidArgument(format!("eps schedule must be positive and decreasing: {schedule:?}")));
    }
    let approx = szego_approximants(h, z, schedule, cfg)?;
    let vals: Vec<Complex64> = approx.iter().map(|e| e.value).collect();
    let quad_err = approx.iter().map(|e| e.error).fold(0.0, f64::max);
    let steps: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let size = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if let [.., a, b] = steps[..] {
        if b > a && b > 1e-9 * size + 4.0 * quad_err {
            return Err(Error::Quadrature(format!("eps extrapolation does not settle: steps {steps:?}")));
        }
    }
    let value = extrapolate_to_zero(schedule, &vals);
    let lower = extrapolate_to_zero(&schedule[1..], &vals[1..]);
    Ok(Estimate { value, error: quad_err + (value - lower).norm() })
}

pub const DECAY_RADII: [f64; 3] = [4.0, 8.0, 16.0];

const DECAY_DIRECTIONS: [(f64, f64); 2] = [(-0.4, 0.7), (0.5, 2.9)];

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub radii: Vec<f64>,
    /// Max of `|S(chi f)|` over the sample directions on each sphere.
    pub values: Vec<f64>,
    /// Max of `|f|` at the same points, for scale.
    pub source: Vec<f64>,
    /// Max quadrature error estimate on each sphere.
    pub errors: Vec<f64>,
    /// Log-log slope of `values`; `-inf` when every value is below the
    /// resolution `errors + 1e-9 |f|`.
    pub slope: f64,
}

impl DecayReport {
    pub fn vanishes(&self) -> bool {
        self.slope == f64::NEG_INFINITY
    }
}

/// Decay of `S(chi f)` along a few rays, `chi` radial with `chi = 0` on
/// `rho <= 1` and `chi = 1` on `rho >= 2`.
pub fn szego_decay(a: f64, radii: &[f64], cfg: &QuadConfig) -> Result<DecayReport> {
    if radii.len() < 2 {
        return Err(Error::InvalidArgument("decay fit needs at least two radii".into()));
    }
    let h = cut_source_field(a);
    let (mut values, mut source, mut errors) = (Vec::new(), Vec::new(), Vec::new());
    for &r in radii {
        let (mut v, mut f, mut e) = (0.0f64, 0.0f64, 0.0f64);
        for &(al, phi) in &DECAY_DIRECTIONS {
            let z = polar_point(r, al, phi);
            let s = szego_apply(&h, &z, &DEFAULT_EPS, cfg)?;
            v = v.max(s.value.norm());
            e = e.max(s.error);
            f = f.max(source_f(a, &z)?.norm());
        }
        values.push(v);
        source.push(f);
        errors.push(e);
    }
    let resolved = values.iter().zip(&errors).zip(&source).any(|((v, e), f)| *v > e + 1e-9 * f);
    let slope = if resolved {
        let n = radii.len();
        let (lx, ly): (Vec<f64>, Vec<f64>) = radii.iter().zip(&values).map(|(r, v)| (r.ln(), v.ln())).unzip();
        let (mx, my) = (lx.iter().sum::<f64>() / n as f64, ly.iter().sum::<f64>() / n as f64);
        let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    } else {
        f64::NEG_INFINITY
    };
    Ok(DecayReport { radii: radii.to_vec(), values, source, errors, slope })
}
