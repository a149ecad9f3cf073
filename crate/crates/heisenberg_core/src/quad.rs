//! Quadrature on the Heisenberg group in polar coordinates adapted to the
//! gauge:
//!
//! `x = rho sqrt(cos a) cos phi`, `y = rho sqrt(cos a) sin phi`, `t = rho^2 sin a`
//!
//! with `a` in `(-pi/2, pi/2)`. The volume `theta0 ^ d theta0 = 4 dx dy dt`
//! becomes `4 rho^3 d rho da d phi`. Angles use Gauss-Legendre in `a` and the
//! periodic trapezoid rule in `phi`; after the `phi` average every smooth
//! integrand is a smooth function of `a`, so both rules converge spectrally.

use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::point::HPoint;

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("max(1) is non-zero");
    let rule = GaussLegendre::new(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

/// Equal-weight nodes on the circle.
pub fn periodic_nodes(n: usize) -> Vec<(f64, f64)> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| (h * k as f64, h)).collect()
}

/// Point of the gauge sphere of radius `rho` at angles `(phi, a)`.
pub fn polar_point(rho: f64, a: f64, phi: f64) -> HPoint {
    let r = rho * a.cos().max(0.0).sqrt();
    HPoint::new(r * phi.cos(), r * phi.sin(), rho * rho * a.sin())
}

/// Evaluates `f` on every node in parallel, then sums sequentially in node
/// order so the result does not depend on the thread schedule.
pub fn weighted_sum<N, F>(nodes: &[(N, f64)], f: F) -> Result<Complex64>
where
    N: Sync,
    F: Fn(&N) -> Result<Complex64> + Sync,
{
    let vals: Vec<Result<Complex64>> = nodes.par_iter().map(|(n, w)| f(n).map(|v| v * *w)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for v in vals {
        acc += v?;
    }
    Ok(acc)
}

/// Node counts for one radial shell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellRule {
    pub n_rho: usize,
    pub n_alpha: usize,
    pub n_phi: usize,
}

impl Default for ShellRule {
    fn default() -> Self {
        ShellRule { n_rho: 16, n_alpha: 32, n_phi: 32 }
    }
}

impl ShellRule {
    fn angular_nodes(&self) -> Vec<((f64, f64), f64)> {
        let alphas = gauss_legendre(-FRAC_PI_2, FRAC_PI_2, self.n_alpha);
        let phis = periodic_nodes(self.n_phi);
        let mut out = Vec::with_capacity(alphas.len() * phis.len());
        for &(a, wa) in &alphas {
            for &(phi, wp) in &phis {
                out.push(((a, phi), wa * wp));
            }
        }
        out
    }
}

/// Weighted nodes for `int f dW` over the gauge annulus `rho_a <= rho <= rho_b`
/// centred at the origin, with Gauss-Legendre in `log rho`.
pub fn shell_nodes(rho_a: f64, rho_b: f64, rule: &ShellRule) -> Result<Vec<(HPoint, f64)>> {
    if !(rho_a > 0.0 && rho_b > rho_a) {
        return Err(Error::InvalidArgument(format!("bad shell [{rho_a}, {rho_b}]")));
    }
    let radial = gauss_legendre(rho_a.ln(), rho_b.ln(), rule.n_rho);
    let angular = rule.angular_nodes();
    let mut nodes = Vec::with_capacity(radial.len() * angular.len());
    for &(s, ws) in &radial {
        let rho = s.exp();
        let jac = 4.0 * rho.powi(4) * ws;
        for &((a, phi), w) in &angular {
            nodes.push((polar_point(rho, a, phi), jac * w));
        }
    }
    Ok(nodes)
}

/// `int f dW` over the gauge annulus `rho_a <= rho <= rho_b`.
pub fn shell_integral<F>(f: &F, rho_a: f64, rho_b: f64, rule: &ShellRule) -> Result<Complex64>
where
    F: Fn(&HPoint) -> Result<Complex64> + Sync,
{
    weighted_sum(&shell_nodes(rho_a, rho_b, rule)?, |p| f(p))
}

/// Result of an improper integral: value plus a heuristic error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

/// Geometric-tail extrapolation from the last three partial contributions.
/// Contributions of dyadic shells of an integrand homogeneous of some degree
/// form a geometric sequence; the sum of the missing shells is `s q / (1 - q)`.
pub fn geometric_tail(shells: &[Complex64]) -> Result<(Complex64, f64)> {
    let n = shells.len();
    if n < 3 {
        return Ok((Complex64::new(0.0, 0.0), shells.last().map_or(0.0, |s| s.norm())));
    }
    let (a, b, c) = (shells[n - 3], shells[n - 2], shells[n - 1]);
    if c.norm() == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    if b.norm() == 0.0 {
        return Err(Error::Quadrature("tail shells vanish irregularly".into()));
    }
    let q = c / b;
    if q.norm() >= 0.95 {
        return Err(Error::Quadrature(format!("tail ratio {:.3} does not decay", q.norm())));
    }
    let tail = c * q / (1.0 - q);
    let q_prev = if a.norm() > 0.0 { b / a } else { q };
    // disagreement between consecutive ratios measures the non-geometric part
    let err = (tail - c * q_prev / (1.0 - q_prev)).norm() + 1e-3 * tail.norm();
    Ok((tail, err))
}

/// `int f dW` over the whole group: dyadic shells from `rho_min` outward to
/// `rho_max` (and inward to `rho_inner` if smaller), with geometric tail
/// extrapolation at both ends. `rho_min` should be a natural scale of `f`.
pub fn whole_space_integral<F>(
    f: &F,
    rho_inner: f64,
    rho_min: f64,
    rho_max: f64,
    rule: &ShellRule,
) -> Result<Estimate>
where
    F: Fn(&HPoint) -> Result<Complex64> + Sync,
{
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut outward = Vec::new();
    let mut r = rho_min;
    while r < rho_max * (1.0 - 1e-12) {
        let s = shell_integral(f, r, 2.0 * r, rule)?;
        outward.push(s);
        total += s;
        r *= 2.0;
    }
    let (tail, e) = geometric_tail(&outward)?;
    total += tail;
    err += e;
    let mut inward = Vec::new();
    let mut r = rho_min;
    while r > rho_inner * (1.0 + 1e-12) {
        let s = shell_integral(f, 0.5 * r, r, rule)?;
        inward.push(s);
        total += s;
        r *= 0.5;
    }
    let (tail, e) = geometric_tail(&inward)?;
    total += tail;
    err += e;
    Ok(Estimate { value: total, error: err })
}

/// The gauge sphere `{rho = radius}` parametrised by `(phi, a)`, oriented as
/// the boundary of the gauge ball: `int beta = int beta(d_phi X, d_a X) dphi da`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceChart {
    pub radius: f64,
    pub n_phi: usize,
    pub n_alpha: usize,
}

/// Data handed to a surface integrand at one node.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceNode {
    pub point: HPoint,
    /// `d X / d phi`
    pub d_phi: [f64; 3],
    /// `d X / d a`
    pub d_alpha: [f64; 3],
}

impl SurfaceChart {
    pub fn new(radius: f64, n_phi: usize, n_alpha: usize) -> Self {
        SurfaceChart { radius, n_phi, n_alpha }
    }

    pub fn nodes(&self) -> Vec<(SurfaceNode, f64)> {
        let rho = self.radius;
        let alphas = gauss_legendre(-FRAC_PI_2, FRAC_PI_2, self.n_alpha);
        let phis = periodic_nodes(self.n_phi);
        let mut out = Vec::with_capacity(alphas.len() * phis.len());
        for &(a, wa) in &alphas {
            let c = -a.sin() / (2.0 * a.cos());
            for &(phi, wp) in &phis {
                let p = polar_point(rho, a, phi);
                out.push((
                    SurfaceNode {
                        point: p,
                        d_phi: [-p.y, p.x, 0.0],
                        d_alpha: [p.x * c, p.y * c, rho * rho * a.cos()],
                    },
                    wa * wp,
                ));
            }
        }
        out
    }

    /// Integrates the 2-form whose value on the two tangent vectors is
    /// returned by `beta`.
    pub fn integrate<F>(&self, beta: F) -> Result<Complex64>
    where
        F: Fn(&SurfaceNode) -> Result<Complex64> + Sync,
    {
        if !(self.radius > 0.0) {
            return Err(Error::InvalidArgument(format!("surface radius must be positive, got {}", self.radius)));
        }
        weighted_sum(&self.nodes(), beta)
    }
}

/// Value of the 2-form with components `b[(xy, xt, yt)]` on `(u, v)`.
pub fn two_form_on(b: [Complex64; 3], u: &[f64; 3], v: &[f64; 3]) -> Complex64 {
    b[0] * (u[0] * v[1] - u[1] * v[0]) + b[1] * (u[0] * v[2] - u[2] * v[0]) + b[2] * (u[1] * v[2] - u[2] * v[1])
}

/// Value of `a ^ b` for two 1-forms on `(u, v)`.
pub fn wedge_on(a: [Complex64; 3], b: [Complex64; 3], u: &[f64; 3], v: &[f64; 3]) -> Complex64 {
    let pair = |f: &[Complex64; 3], w: &[f64; 3]| f[0] * w[0] + f[1] * w[1] + f[2] * w[2];
    pair(&a, u) * pair(&b, v) - pair(&a, v) * pair(&b, u)
}
