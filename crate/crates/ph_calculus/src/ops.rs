//! Field-level pseudohermitian package: frame, connection, torsion,
//! curvature and the operators built from covariant derivatives.

use heisenberg_core::{Complex64, Domain, HPoint, Jet, Result, ScalarField};

use crate::coframe::{Coframe, OneForm};
use crate::structure::{parse_word, Idx, Local};

use Idx::{One, OneBar, Zero};

/// A pseudohermitian structure given by an admissible coframe; all derived
/// quantities are computed on demand from jets of the coframe.
#[derive(Clone, Debug)]
pub struct PHStructure {
    coframe: Coframe,
}

/// Dual frame as coefficient fields on `(d_x, d_y, d_t)`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub t: [ScalarField; 3],
    pub z1: [ScalarField; 3],
}

impl PHStructure {
    pub fn new(coframe: Coframe) -> Self {
        PHStructure { coframe }
    }

    pub fn flat() -> Self {
        Self::new(Coframe::flat())
    }

    pub fn coframe(&self) -> &Coframe {
        &self.coframe
    }

    pub fn domain(&self) -> &Domain {
        self.coframe.domain()
    }

    pub fn name(&self) -> &str {
        self.coframe.name()
    }

    /// Structure data at `p` with the coframe expanded to `order`.
    pub fn local(&self, p: &HPoint, order: usize) -> Result<Local> {
        Local::new(&self.coframe, p, order)
    }

    /// A field whose order-`n` jet is computed from the local structure at
    /// order `n + lift`.
    pub fn derived(
        &self,
        name: &str,
        lift: usize,
        f: impl Fn(&Local, usize) -> Result<Jet> + Send + Sync + 'static,
    ) -> ScalarField {
        let cf = self.coframe.clone();
        ScalarField::from_jet_fn(name, self.domain().clone(), move |p, n| {
            let loc = Local::new(&cf, p, (n + lift).max(2))?;
            Ok(f(&loc, n)?.truncate(n))
        })
    }

    /// As [`derived`](Self::derived), for an operator applied to `g`, which is
    /// expanded to order `n + depth`.
    pub fn derived_from(
        &self,
        g: &ScalarField,
        name: &str,
        depth: usize,
        lift: usize,
        f: impl Fn(&Local, &Jet) -> Jet + Send + Sync + 'static,
    ) -> ScalarField {
        let cf = self.coframe.clone();
        let g2 = g.clone();
        ScalarField::from_jet_fn(name, self.domain().and(g.domain()), move |p, n| {
            let loc = Local::new(&cf, p, (n + lift).max(2))?;
            let gj = g2.jet(p, n + depth)?;
            Ok(f(&loc, &gj).truncate(n))
        })
    }

    pub fn dual_frame(&self) -> Frame {
        let comp = |which: usize, i: usize| {
            let name = format!("{}.{}[{i}]", self.name(), if which == 0 { "T" } else { "Z1" });
            self.derived(&name, 0, move |loc, _| Ok(if which == 0 { loc.t[i].clone() } else { loc.z1[i].clone() }))
        };
        Frame { t: [comp(0, 0), comp(0, 1), comp(0, 2)], z1: [comp(1, 0), comp(1, 1), comp(1, 2)] }
    }

    /// Connection form and torsion `A_11`.
    pub fn connection_torsion(&self) -> (OneForm, ScalarField) {
        let cf = self.coframe.clone();
        let omega = OneForm::from_real(&format!("{}.omega", self.name()), self.domain().clone(), move |p, n| {
            let loc = Local::new(&cf, p, (n + 1).max(2))?;
            Ok(loc.omega().map(|j| j.truncate(n)))
        });
        (omega, self.torsion())
    }

    pub fn torsion(&self) -> ScalarField {
        self.derived(&format!("{}.A11", self.name()), 1, |loc, _| Ok(loc.a11.clone()))
    }

    /// `omega(Z1)`
    pub fn connection_on_z1(&self) -> ScalarField {
        self.derived(&format!("{}.omega(Z1)", self.name()), 1, |loc, _| Ok(loc.conn_a.clone()))
    }

    /// Tanaka-Webster curvature.
    pub fn curvature(&self) -> ScalarField {
        self.derived(&format!("{}.R", self.name()), 2, |loc, _| Ok(loc.r.clone()))
    }

    /// Covariant derivative of a function along an index word.
    pub fn cov_deriv(&self, f: &ScalarField, word: &str) -> Result<ScalarField> {
        self.cov_deriv_tensor(f, 0, word)
    }

    /// Covariant derivative of a tensor component of weight `k = #1 - #1bar`.
    pub fn cov_deriv_tensor(&self, c: &ScalarField, k: i32, word: &str) -> Result<ScalarField> {
        let w = parse_word(word)?;
        let len = w.len();
        Ok(self.derived_from(c, &format!("{}_,{word}", c.name()), len, len + 1, move |loc, j| loc.cov(j, k, &w)))
    }

    pub fn sublaplacian(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("Delta_b({})", f.name()), 2, 3, |loc, j| sublaplacian_jet(loc, j))
    }

    /// `Box_b f = -Delta_b f + i T f`
    pub fn kohn_box(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("Box_b({})", f.name()), 2, 3, |loc, j| kohn_box_jet(loc, j))
    }

    /// `-2 f,_{1bar 1}`, the second expression of the Kohn Laplacian.
    pub fn kohn_box_alt(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("Box_b'({})", f.name()), 2, 3, |loc, j| {
            loc.cov(j, 0, &[OneBar, One]).scale(-2.0)
        })
    }

    /// `L_b f = -4 Delta_b f + R f`
    pub fn conformal_sublap(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("L_b({})", f.name()), 2, 3, |loc, j| conformal_sublap_jet(loc, j))
    }

    /// `P f = 4 (f,_{1bar 1 1} + i A_11 f,_{1bar}),_{1bar}`
    pub fn paneitz(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("P({})", f.name()), 4, 5, |loc, j| paneitz_jet(loc, j))
    }

    /// `Delta_b^2 f + T^2 f + 4 Im (A_1bar1bar f,_1),_1`, valid for real `f`.
    pub fn paneitz_real_form(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("P'({})", f.name()), 4, 5, |loc, j| paneitz_real_form_jet(loc, j))
    }

    /// `P_3 f = f,_{1bar 1 1} + i A_11 f,_{1bar}`
    pub fn paneitz_p3(&self, f: &ScalarField) -> ScalarField {
        self.derived_from(f, &format!("P3({})", f.name()), 3, 4, |loc, j| p3_jet(loc, j))
    }

    /// Residuals of the three commutation relations for a tensor component
    /// `c` of weight `k`.
    pub fn commutation_residuals(&self, c: &ScalarField, k: i32) -> [ScalarField; 3] {
        let mk = |which: usize| {
            self.derived_from(c, &format!("comm{which}({})", c.name()), 2, 4, move |loc, j| {
                commutation_jet(loc, j, k)[which].clone()
            })
        };
        [mk(0), mk(1), mk(2)]
    }

    /// `Omega_11 = R,_11/6 + (i/2) R A_11 - A_11,_0 - (2i/3) A_11,_1bar^1bar`.
    ///
    /// The last index is raised with `h_11bar = 1`, so the term is computed
    /// as `A_11,_{1bar 1}`; this is the only reading of weight two, and it
    /// is the one that vanishes on spherical structures.
    pub fn cartan_tensor(&self) -> ScalarField {
        self.derived(&format!("{}.Cartan", self.name()), 4, |loc, _| Ok(cartan_jet(loc)))
    }
}

pub fn sublaplacian_jet(loc: &Local, f: &Jet) -> Jet {
    &loc.cov(f, 0, &[One, OneBar]) + &loc.cov(f, 0, &[OneBar, One])
}

pub fn kohn_box_jet(loc: &Local, f: &Jet) -> Jet {
    let d = sublaplacian_jet(loc, f);
    let t = loc.frame_deriv(f, Zero).scale(Complex64::i());
    &t - &d
}

pub fn conformal_sublap_jet(loc: &Local, f: &Jet) -> Jet {
    let d = sublaplacian_jet(loc, f);
    &(&loc.r * f) - &d.scale(4.0)
}

pub fn p3_jet(loc: &Local, f: &Jet) -> Jet {
    let f1b = loc.cov(f, 0, &[OneBar]);
    let third = loc.cov(&f1b, -1, &[One, One]);
    let tors = (&loc.a11 * &f1b).scale(Complex64::i());
    &third + &tors
}

pub fn paneitz_jet(loc: &Local, f: &Jet) -> Jet {
    let inner = p3_jet(loc, f);
    loc.cov(&inner, 1, &[OneBar]).scale(4.0)
}

pub fn paneitz_real_form_jet(loc: &Local, f: &Jet) -> Jet {
    let lap = sublaplacian_jet(loc, f);
    let lap2 = sublaplacian_jet(loc, &lap);
    let tt = loc.cov(f, 0, &[Zero, Zero]);
    let f1 = loc.cov(f, 0, &[One]);
    let inner = &loc.a1b1b() * &f1;
    let outer = loc.cov(&inner, -1, &[One]);
    let mut out = &lap2 + &tt;
    out += &outer.im().scale(4.0);
    out
}

pub fn commutation_jet(loc: &Local, c: &Jet, k: i32) -> [Jet; 3] {
    let kf = k as f64;
    let c0 = c.truncate(c.order() - 2);
    let first = {
        let lhs = &loc.cov(c, k, &[One, OneBar]) - &loc.cov(c, k, &[OneBar, One]);
        let rhs = &loc.cov(c, k, &[Zero]).scale(Complex64::i()) + &(&c0 * &loc.r).scale(kf);
        &lhs - &rhs
    };
    let a11 = &loc.a11;
    let a1b1b = loc.a1b1b();
    let second = {
        let lhs = &loc.cov(c, k, &[Zero, One]) - &loc.cov(c, k, &[One, Zero]);
        let rhs = &(&loc.cov(c, k, &[OneBar]) * a11) - &(&c0 * &loc.cov(a11, 2, &[OneBar])).scale(kf);
        &lhs - &rhs
    };
    let third = {
        let lhs = &loc.cov(c, k, &[Zero, OneBar]) - &loc.cov(c, k, &[OneBar, Zero]);
        let rhs = &(&loc.cov(c, k, &[One]) * &a1b1b) + &(&c0 * &loc.cov(&a1b1b, -2, &[One])).scale(kf);
        &lhs - &rhs
    };
    [first, second, third]
}

pub fn cartan_jet(loc: &Local) -> Jet {
    let i = Complex64::i();
    let r11 = loc.cov(&loc.r, 0, &[One, One]).scale(1.0 / 6.0);
    let ra = (&loc.r * &loc.a11).scale(0.5 * i);
    let a0 = loc.cov(&loc.a11, 2, &[Zero]);
    let a1b1b = loc.cov(&loc.a11, 2, &[OneBar, One]).scale(2.0 / 3.0 * i);
    let mut out = &r11 + &ra;
    out += &(-a0);
    out += &(-a1b1b);
    out
}
