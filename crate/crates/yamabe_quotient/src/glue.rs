//! The glued test function: the bubble inside `rho0`, the rescaled Green's
//! function outside `2 rho0`, and a cutoff blend in between.

use heisenberg_core::quad::{polar_point, ShellRule};
use heisenberg_core::{Coords, Domain, Error, HPoint, Jet, Result, ScalarField};

use crate::bubble::bubble_jet;

#[derive(Clone, Debug)]
pub struct QuotientConfig {
    /// Bubble concentration.
    pub lambda: f64,
    /// Gluing radius.
    pub rho0: f64,
    /// `2 pi A`
    pub a_tilde: f64,
    /// `c1` of the generator `w = c1 x / (1 + rho^4)`.
    pub w_coeff: f64,
    /// Tanaka-Webster curvature of the structure the quotient is taken on.
    pub curvature: ScalarField,
    pub rule: ShellRule,
    /// Innermost resolved shell, in units of `1 / lambda`.
    pub inner: f64,
    /// Outermost resolved shell, in units of `rho0`, before tail extrapolation.
    pub outer: f64,
    /// Radius, in units of `rho0`, of the chart region standing in for the
    /// whole manifold in the denominator of the glued quotient.
    pub manifold_radius: f64,
}

impl QuotientConfig {
    pub fn new(lambda: f64, rho0: f64, a_tilde: f64) -> Self {
        QuotientConfig {
            lambda,
            rho0,
            a_tilde,
            w_coeff: 0.0,
            curvature: ScalarField::zero(),
            rule: ShellRule { n_rho: 16, n_alpha: 32, n_phi: 8 },
            inner: 1e-3,
            outer: 64.0,
            manifold_radius: 4.0,
        }
    }

    pub fn with_curvature(mut self, r: ScalarField) -> Self {
        self.curvature = r;
        self
    }

    pub fn with_w_coeff(mut self, c1: f64) -> Self {
        self.w_coeff = c1;
        self
    }

    pub fn with_rule(mut self, rule: ShellRule) -> Self {
        self.rule = rule;
        self
    }

    /// `lambda rho0 >= 10` and sane quadrature settings.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.lambda > 0.0 && self.rho0 > 0.0) {
            return bad(format!("lambda and rho0 must be positive, got {}, {}", self.lambda, self.rho0));
        }
        if !(self.lambda * self.rho0 >= 10.0) {
            return bad(format!("lambda rho0 = {} is below 10", self.lambda * self.rho0));
        }
        if !self.a_tilde.is_finite() || !self.w_coeff.is_finite() {
            return bad("Atilde and w coefficient must be finite".into());
        }
        if !(self.inner > 0.0 && self.inner / self.lambda < self.rho0 && self.outer > 2.0 && self.manifold_radius >= 2.0) {
            return bad(format!("bad shell range inner={} outer={}", self.inner, self.outer));
        }
        if self.rule.n_rho == 0 || self.rule.n_alpha == 0 || self.rule.n_phi == 0 {
            return bad("shell rule needs positive node counts".into());
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus `lambda^2 rho0^4 >= 100`.
    pub fn validate_scan(&self) -> Result<()> {
        self.validate()?;
        let s = self.lambda * self.lambda * self.rho0.powi(4);
        if !(s >= 100.0) {
            return Err(Error::InvalidArgument(format!("lambda^2 rho0^4 = {s} is below 100")));
        }
        Ok(())
    }

    /// `1 / (lambda (1 + Atilde rho0^2))`, the constant making the glued
    /// function continuous at `rho0`.
    pub fn eps0(&self) -> f64 {
        1.0 / (self.lambda * (1.0 + self.a_tilde * self.rho0 * self.rho0))
    }
}

/// `w = c1 x / (1 + rho^4)`: vanishes at the origin, grows like `rho` nearby.
pub fn w_jet(c1: f64, c: &Coords) -> Jet {
    (&c.x * &c.rho4().add_const(1.0).recip()).scale(c1)
}

/// `rho^-2 + Atilde + w`
pub fn green_jet(a_tilde: f64, c1: f64, c: &Coords) -> Jet {
    &c.rho2().recip().add_const(a_tilde) + &w_jet(c1, c)
}

fn step_weight(x: &Jet) -> Jet {
    // e^{-1/x}, only evaluated for 0 < x
    x.recip().scale(-1.0).exp()
}

/// Cutoff `psi0(rho / rho0)`: one for `rho <= rho0`, zero for `rho >= 2 rho0`.
pub fn cutoff_jet(rho0: f64, c: &Coords) -> Jet {
    let s = c.rho().scale(1.0 / rho0).add_const(-1.0);
    let v = s.value().re;
    if v <= 0.0 {
        Jet::constant(c.t.order(), 1.0)
    } else if v >= 1.0 {
        Jet::zero(c.t.order())
    } else {
        let rise = step_weight(&s.scale(-1.0).add_const(1.0));
        let fall = step_weight(&s);
        &rise * &(&rise + &fall).recip()
    }
}

/// `phi = (t^2 + |z|^4 + 2|z|^2/lambda^2 + 1/lambda^4)^{-1/2} - rho^-2 = lambda omega - rho^-2`
pub fn correction_jet(lambda: f64, c: &Coords) -> Jet {
    &bubble_jet(lambda, c).scale(lambda) - &c.rho2().recip()
}

/// Which branch of the glued function a point falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Bubble,
    Blend,
    Green,
}

pub fn region(rho0: f64, p: &HPoint) -> Region {
    let rho = heisenberg_core::gauge_rho(p);
    if rho <= rho0 {
        Region::Bubble
    } else if rho <= 2.0 * rho0 {
        Region::Blend
    } else {
        Region::Green
    }
}

/// Jet of one branch of the glued function, wherever `c` lies.
pub fn branch_jet(cfg: &QuotientConfig, branch: Region, c: &Coords) -> Jet {
    let (lambda, eps0) = (cfg.lambda, cfg.eps0());
    match branch {
        Region::Bubble => bubble_jet(lambda, c),
        Region::Blend => {
            let psi = cutoff_jet(cfg.rho0, c);
            let g = green_jet(cfg.a_tilde, cfg.w_coeff, c);
            let gw = &g - &(&psi * &w_jet(cfg.w_coeff, c));
            &gw.scale(eps0) + &(&psi * &correction_jet(lambda, c)).scale(1.0 / lambda)
        }
        Region::Green => green_jet(cfg.a_tilde, cfg.w_coeff, c).scale(eps0),
    }
}

/// Jet of the glued function, using the branch that contains `p`.
pub fn test_function_jet(cfg: &QuotientConfig, c: &Coords) -> Jet {
    branch_jet(cfg, region(cfg.rho0, &c.point), c)
}

pub fn test_function(cfg: &QuotientConfig, p: &HPoint) -> Result<f64> {
    cfg.validate()?;
    Ok(test_function_jet(cfg, &Coords::new(p, 0)).value().re)
}

/// The glued function as a field.
pub fn test_function_field(cfg: &QuotientConfig) -> Result<ScalarField> {
    cfg.validate()?;
    let cfg = cfg.clone();
    let name = format!("u[lambda={}, rho0={}, Atilde={}]", cfg.lambda, cfg.rho0, cfg.a_tilde);
    Ok(ScalarField::closed_form(&name, Domain::everywhere(), move |c| test_function_jet(&cfg, c)))
}

/// Largest jump between adjacent branches on the spheres `rho = rho0` and
/// `rho = 2 rho0`, sampled along `directions` `(a, phi)`.
pub fn continuity_gap(cfg: &QuotientConfig, directions: &[(f64, f64)]) -> Result<f64> {
    cfg.validate()?;
    let mut worst = 0.0f64;
    for &(a, phi) in directions {
        for (radius, lo, hi) in [(cfg.rho0, Region::Bubble, Region::Blend), (2.0 * cfg.rho0, Region::Blend, Region::Green)] {
            let c = Coords::new(&polar_point(radius, a, phi), 0);
            let gap = (branch_jet(cfg, lo, &c).value() - branch_jet(cfg, hi, &c).value()).norm();
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}
