//! A structure in CR normal coordinates to fourth order about the origin `q`.
//!
//! The model is the flat structure deformed by `E_11` and then rescaled by
//! `e^{2f}`, with `E_11` and `f` polynomials of weighted degree four in
//! `(z, zbar, t)` (`t` has weight two). That gives
//! `theta = (1 + O(rho^4)) theta0`, `theta1 = (1 + O(rho^4)) sqrt 2 dz + O(rho^4) dzbar + O(rho^3) theta0`,
//! and every quantity of weighted order below two vanishes at `q`. The 27
//! real coefficients are fitted so that the weighted-order-two jets at `q`
//! take the values in a [`NormalBundle`] and `Delta_b R(q) = R,_0(q) = 0`.

use conformal_deform::{conformal_change, finite_deformation, DeformationField};
use heisenberg_core::quad::polar_point;
use heisenberg_core::{Complex64, Coords, Domain, Error, HPoint, Jet, Result, ScalarField};
use nalgebra::{DMatrix, DVector};
use ph_calculus::ops::{cartan_jet, sublaplacian_jet};
use ph_calculus::{Idx, Local, PHStructure};

use Idx::{One, OneBar, Zero};

/// Prescribed weighted-order-two data at `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalBundle {
    /// `R,_11(q)`
    pub r_11: Complex64,
    /// `A_11,_0(q)`
    pub a11_0: Complex64,
    /// `A_11,_1bar^1bar(q)`, i.e. `A_11,_{1bar 1}` with `h_11bar = 1`
    pub a11_1bar_1bar: Complex64,
}

impl NormalBundle {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        NormalBundle { r_11: z, a11_0: z, a11_1bar_1bar: z }
    }

    /// The values forced by a Cartan tensor `Omega_11(q) = omega`:
    /// `A_11,_0 = -4/5 Omega`, `A_11,_1bar^1bar = 12i/35 Omega`, `R,_11 = -6/35 Omega`.
    pub fn from_cartan(omega: Complex64) -> Self {
        NormalBundle {
            r_11: omega * (-6.0 / 35.0),
            a11_0: omega * (-4.0 / 5.0),
            a11_1bar_1bar: omega * Complex64::new(0.0, 12.0 / 35.0),
        }
    }

    /// `R,_11/6 - A_11,_0 - (2i/3) A_11,_1bar^1bar`, the Cartan tensor at `q` (where `R = 0`).
    pub fn cartan(&self) -> Complex64 {
        self.r_11 / 6.0 - self.a11_0 - Complex64::new(0.0, 2.0 / 3.0) * self.a11_1bar_1bar
    }
}

/// Exponents `(a, b, c)` with `z^a zbar^b t^c` of weighted degree four.
const MONOMIALS: [(u32, u32, u32); 9] =
    [(4, 0, 0), (3, 1, 0), (2, 2, 0), (1, 3, 0), (0, 4, 0), (2, 0, 1), (1, 1, 1), (0, 2, 1), (0, 0, 2)];

fn monomial(c: &Coords, (a, b, k): (u32, u32, u32)) -> Jet {
    let (z, zb) = (c.z(), c.zbar());
    let mut m = c.constant(1.0);
    for _ in 0..a {
        m = &m * &z;
    }
    for _ in 0..b {
        m = &m * &zb;
    }
    for _ in 0..k {
        m = &m * &c.t;
    }
    m
}

/// Coefficients of the model: complex ones for `E_11` on [`MONOMIALS`] and
/// real ones for `f` on the real parts of `c m` for the same monomials,
/// with `c` in `{1, i}` where `m` is not real.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalCoefficients {
    pub e11: [Complex64; 9],
    pub f: [Complex64; 9],
}

impl NormalCoefficients {
    const LEN: usize = 27;

    fn from_vec(v: &[f64]) -> Self {
        let e11 = std::array::from_fn(|m| Complex64::new(v[2 * m], v[2 * m + 1]));
        let mut f = [Complex64::new(0.0, 0.0); 9];
        let mut k = 18;
        for (m, &(a, b, _)) in MONOMIALS.iter().enumerate() {
            // Re(c z^a zbar^b t^k) for a > b covers the a < b monomial too
            match a.cmp(&b) {
                std::cmp::Ordering::Greater => {
                    f[m] = Complex64::new(v[k], v[k + 1]);
                    k += 2;
                }
                std::cmp::Ordering::Equal => {
                    f[m] = Complex64::new(v[k], 0.0);
                    k += 1;
                }
                std::cmp::Ordering::Less => {}
            }
        }
        debug_assert_eq!(k, Self::LEN);
        NormalCoefficients { e11, f }
    }

    fn e11_jet(&self, c: &Coords) -> Jet {
        let mut acc = c.constant(0.0);
        for (m, &e) in MONOMIALS.iter().zip(&self.e11) {
            acc += &monomial(c, *m).scale(e);
        }
        acc
    }

    fn f_jet(&self, c: &Coords) -> Jet {
        let mut acc = c.constant(0.0);
        for (m, &e) in MONOMIALS.iter().zip(&self.f) {
            if e != Complex64::new(0.0, 0.0) {
                acc += &monomial(c, *m).scale(e).re();
            }
        }
        acc
    }

    pub fn structure(&self) -> PHStructure {
        let (a, b) = (self.clone(), self.clone());
        let e = ScalarField::closed_form("E_11", Domain::everywhere(), move |c| a.e11_jet(c));
        let f = ScalarField::closed_form("f", Domain::everywhere(), move |c| b.f_jet(c));
        let deformed = finite_deformation(&PHStructure::flat(), &DeformationField::new(e), 1.0);
        conformal_change(&deformed, &f)
    }
}

/// Jets at `q` that the normal-coordinate conditions and the bundle constrain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OriginData {
    pub a11: Complex64,
    pub r: Complex64,
    pub r_1: Complex64,
    pub delta_b_r: Complex64,
    pub r_0: Complex64,
    /// `R_xx + R_yy`
    pub r_xx_plus_r_yy: f64,
    pub r_11: Complex64,
    pub a11_0: Complex64,
    pub a11_1bar_1bar: Complex64,
    pub cartan: Complex64,
}

impl OriginData {
    /// Largest violation of `A_11 = R = R,_1 = Delta_b R = R,_0 = 0` and `R_yy = -R_xx`.
    pub fn normal_residual(&self) -> f64 {
        [self.a11, self.r, self.r_1, self.delta_b_r, self.r_0, Complex64::new(self.r_xx_plus_r_yy, 0.0)]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the prescribed bundle.
    pub fn bundle_residual(&self, b: &NormalBundle) -> f64 {
        [self.r_11 - b.r_11, self.a11_0 - b.a11_0, self.a11_1bar_1bar - b.a11_1bar_1bar]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

pub fn origin_data(st: &PHStructure) -> Result<OriginData> {
    let loc = Local::new(st.coframe(), &HPoint::ORIGIN, 6)?;
    let (r, a) = (&loc.r, &loc.a11);
    Ok(OriginData {
        a11: a.value(),
        r: r.value(),
        r_1: loc.cov(r, 0, &[One]).value(),
        delta_b_r: sublaplacian_jet(&loc, r).value(),
        r_0: loc.cov(r, 0, &[Zero]).value(),
        r_xx_plus_r_yy: (r.partial([2, 0, 0]) + r.partial([0, 2, 0])).re,
        r_11: loc.cov(r, 0, &[One, One]).value(),
        a11_0: loc.cov(a, 2, &[Zero]).value(),
        a11_1bar_1bar: loc.cov(a, 2, &[OneBar, One]).value(),
        cartan: cartan_jet(&loc).value(),
    })
}

/// The fitted targets as a real vector.
fn targets(d: &OriginData) -> [f64; 8] {
    [d.r_11.re, d.r_11.im, d.a11_0.re, d.a11_0.im, d.a11_1bar_1bar.re, d.a11_1bar_1bar.im, d.delta_b_r.re, d.r_0.re]
}

/// Tolerance on the fitted conditions at `q`.
pub const NORMAL_TOL: f64 = 1e-8;

/// The model for `bundle`, its coefficients and the data at `q`.
#[derive(Clone, Debug)]
pub struct NormalModel {
    pub bundle: NormalBundle,
    pub coefficients: NormalCoefficients,
    pub structure: PHStructure,
    pub origin: OriginData,
}

/// Builds the model by a minimum-norm least-squares fit; the weighted-order
/// two data at `q` depend linearly on the coefficients, since products of
/// two degree-four terms only enter at weighted order eight.
pub fn normal_coords_model(bundle: &NormalBundle) -> Result<NormalModel> {
    let vals = [bundle.r_11, bundle.a11_0, bundle.a11_1bar_1bar];
    if vals.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::InvalidArgument(format!("non-finite coefficient bundle {bundle:?}")));
    }
    let n = NormalCoefficients::LEN;
    let mut jac = DMatrix::<f64>::zeros(8, n);
    for j in 0..n {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        let d = origin_data(&NormalCoefficients::from_vec(&v).structure())?;
        for (i, x) in targets(&d).into_iter().enumerate() {
            jac[(i, j)] = x;
        }
    }
    let rhs = DVector::from_vec(vec![
        bundle.r_11.re,
        bundle.r_11.im,
        bundle.a11_0.re,
        bundle.a11_0.im,
        bundle.a11_1bar_1bar.re,
        bundle.a11_1bar_1bar.im,
        0.0,
        0.0,
    ]);
    let sol = jac
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidArgument(format!("normal-coordinate fit failed: {e}")))?;
    let coefficients = NormalCoefficients::from_vec(sol.as_slice());
    let structure = coefficients.structure();
    let origin = origin_data(&structure)?;
    let scale = vals.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let (nres, bres) = (origin.normal_residual(), origin.bundle_residual(bundle));
    if nres > NORMAL_TOL * scale || bres > NORMAL_TOL * scale {
        return Err(Error::InvalidArgument(format!(
            "inconsistent coefficient bundle {bundle:?}: residuals {nres:e} (normal conditions), {bres:e} (bundle)"
        )));
    }
    Ok(NormalModel { bundle: *bundle, coefficients, structure, origin })
}

/// Decomposes a `(dx, dy, dt)` form at `p` as `c theta0 + a dz + b dzbar`.
fn split(p: &HPoint, f: [Complex64; 3]) -> [Complex64; 3] {
    let c = f[2];
    let u = f[0] + 2.0 * p.y * c;
    let v = f[1] - 2.0 * p.x * c;
    let i = Complex64::i();
    [c, (u - i * v) * 0.5, (u + i * v) * 0.5]
}

/// Fitted decay exponents as `rho -> 0`; `f64::INFINITY` when the
/// coefficient vanishes identically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderReport {
    /// `theta`: `theta0` coefficient minus one, `dz`, `dzbar`.
    pub theta: [f64; 3],
    /// `theta1`: `sqrt 2 dz` coefficient minus one, `dzbar`, `theta0`.
    pub theta1: [f64; 3],
    /// connection form: `dz`, `dzbar`, `theta0`.
    pub omega: [f64; 3],
}

/// Coefficients below this size count as identically zero in the order fit.
pub const VANISHING: f64 = 1e-14;

/// Radii of the order fit.
pub const ORDER_RADII: [f64; 3] = [0.01, 0.02, 0.04];

fn slope(radii: &[f64], vals: &[f64]) -> f64 {
    if vals.iter().all(|&v| v < VANISHING) {
        return f64::INFINITY;
    }
    let pts: Vec<(f64, f64)> = radii.iter().zip(vals).map(|(r, v)| (r.ln(), v.max(1e-300).ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn order_report(st: &PHStructure) -> Result<OrderReport> {
    const DIRS: [(f64, f64); 5] = [(-1.1, 0.3), (-0.4, 2.0), (0.2, 3.7), (0.8, 5.1), (1.3, 1.2)];
    let s2 = std::f64::consts::SQRT_2;
    let mut maxima = [[[0.0f64; 3]; 3]; ORDER_RADII.len()];
    for (k, &rho) in ORDER_RADII.iter().enumerate() {
        for &(a, phi) in &DIRS {
            let p = polar_point(rho, a, phi);
            let loc = Local::new(st.coframe(), &p, 2)?;
            let th = split(&p, loc.coframe.theta.clone().map(|j| j.value()));
            let th1 = split(&p, loc.coframe.theta1.clone().map(|j| j.value()));
            let om = split(&p, loc.omega().map(|j| j.value()));
            let rows = [
                [(th[0] - 1.0).norm(), th[1].norm(), th[2].norm()],
                [(th1[1] / s2 - 1.0).norm(), th1[2].norm(), th1[0].norm()],
                [om[1].norm(), om[2].norm(), om[0].norm()],
            ];
            for (m, row) in maxima[k].iter_mut().zip(rows) {
                for (x, v) in m.iter_mut().zip(row) {
                    *x = x.max(v);
                }
            }
        }
    }
    let fit = |which: usize, i: usize| slope(&ORDER_RADII, &maxima.iter().map(|m| m[which][i]).collect::<Vec<_>>());
    Ok(OrderReport {
        theta: std::array::from_fn(|i| fit(0, i)),
        theta1: std::array::from_fn(|i| fit(1, i)),
        omega: std::array::from_fn(|i| fit(2, i)),
    })
}
