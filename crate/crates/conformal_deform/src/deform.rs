//! Deformations `J(s)` of the CR structure with `J' = 2E`,
//! `E = E_11 theta1 (x) Z1bar + E_1bar1bar theta1bar (x) Z1`, at fixed `theta`.

use heisenberg_core::{Complex64, Error, Jet, Result, ScalarField};
use ph_calculus::{Coframe, CoframeJets, Idx, Local, OneForm, PHStructure};

use Idx::{One, OneBar, Zero};

/// The component `E_11`; `E_1bar1bar` is its conjugate.
#[derive(Clone, Debug)]
pub struct DeformationField {
    pub e11: ScalarField,
}

impl DeformationField {
    pub fn new(e11: ScalarField) -> Self {
        DeformationField { e11 }
    }

    pub fn zero() -> Self {
        Self::new(ScalarField::zero())
    }

    pub fn e1b1b(&self) -> ScalarField {
        self.e11.conj()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.e11.scale(s))
    }
}

/// First variations at `s = 0`.
#[derive(Clone, Debug)]
pub struct FirstVariation {
    /// `Z1' = -i E_11 Z1bar`, components on `(d_x, d_y, d_t)`
    pub z1: [ScalarField; 3],
    /// `theta1' = -i E_1bar1bar theta1bar`
    pub theta1: OneForm,
    /// `omega' = i (A_11 E_1bar1bar + A_1bar1bar E_11) theta - i (E_11,_1bar theta1 + E_1bar1bar,_1 theta1bar)`
    pub omega: OneForm,
    /// `A_11' = i E_11,_0`
    pub a11: ScalarField,
    /// `R' = i (E_11,_{1bar 1bar} - E_1bar1bar,_{11}) - (A_11 E_1bar1bar + A_1bar1bar E_11)`
    pub r: ScalarField,
}

fn a_e_coupling(loc: &Local, e: &Jet) -> Jet {
    let n = e.order().min(loc.a11.order());
    let ae = &loc.a11.truncate(n) * &e.truncate(n).conj();
    &ae + &ae.conj()
}

pub fn deform_first_order(st: &PHStructure, e: &DeformationField) -> FirstVariation {
    let name = st.name().to_string();
    let i = Complex64::i();
    let z1 = std::array::from_fn(|k| {
        st.derived_from(&e.e11, &format!("{name}.Z1'[{k}]"), 0, 0, move |loc, ej| {
            &ej.scale(-i) * &loc.z1bar[k]
        })
    });

    let (cf, ef) = (st.coframe().clone(), e.e11.clone());
    let domain = st.domain().and(e.e11.domain());
    let theta1 = OneForm::from_real(&format!("{name}.theta1'"), domain.clone(), move |p, n| {
        let th1 = cf.jets(p, n)?.theta1;
        let eb = ef.jet(p, n)?.conj().scale(-i);
        Ok(th1.map(|c| &eb * &c.conj()))
    });

    let (cf, ef) = (st.coframe().clone(), e.e11.clone());
    let omega = OneForm::from_real(&format!("{name}.omega'"), domain, move |p, n| {
        let loc = Local::new(&cf, p, (n + 1).max(2))?;
        let ej = ef.jet(p, n + 1)?;
        let e1 = loc.cov(&ej, 2, &[OneBar]).truncate(n);
        let c = a_e_coupling(&loc, &ej).truncate(n).scale(i);
        let cj = &loc.coframe;
        Ok(std::array::from_fn(|k| {
            let mut w = &c * &cj.theta[k].truncate(n);
            w += &(&e1 * &cj.theta1[k].truncate(n)).scale(-i);
            w += &(&e1.conj() * &cj.theta1[k].conj().truncate(n)).scale(-i);
            w
        }))
    });

    let a11 = st.derived_from(&e.e11, &format!("{name}.A11'"), 1, 2, move |loc, ej| {
        loc.cov(ej, 2, &[Zero]).scale(i)
    });

    let r = st.derived_from(&e.e11, &format!("{name}.R'"), 2, 3, move |loc, ej| r_dot_jet(loc, ej));

    FirstVariation { z1, theta1, omega, a11, r }
}

fn r_dot_jet(loc: &Local, ej: &Jet) -> Jet {
    let x = loc.cov(ej, 2, &[OneBar, OneBar]);
    let n = x.order();
    let diff = (&x - &x.conj()).scale(Complex64::i());
    &diff - &a_e_coupling(loc, ej).truncate(n)
}

/// The deformed structure at finite `s` with the same contact form:
/// `theta1(s) = (theta1 - i s E_1bar1bar theta1bar) / sqrt(1 - s^2 |E_11|^2)`.
///
/// It is admissible for every `s` with `s |E_11| < 1` and has `theta1'(0)`
/// as in [`FirstVariation`]; for constant `E_11` on the flat model it has no
/// second-order change of `E`.
pub fn finite_deformation(st: &PHStructure, e: &DeformationField, s: f64) -> PHStructure {
    let (cf, ef) = (st.coframe().clone(), e.e11.clone());
    let name = format!("{}[s={s}]", st.name());
    let domain = st.domain().and(e.e11.domain());
    PHStructure::new(Coframe::new(&name, domain, move |p, k| {
        let cj = cf.jets(p, k)?;
        let ej = ef.jet(p, k)?;
        let norm2 = (&ej * &ej.conj()).re().scale(-s * s).add_const(1.0);
        if norm2.value().re <= 0.0 {
            return Err(Error::Singular { what: "deformation with s|E| >= 1", point: *p });
        }
        let inv = norm2.powf(-0.5);
        let eb = ej.conj().scale(Complex64::new(0.0, -s));
        let theta1 = std::array::from_fn(|i| &inv * &(&cj.theta1[i] + &(&eb * &cj.theta1[i].conj())));
        Ok(CoframeJets { theta: cj.theta, theta1 })
    }))
}

/// Variations of `Delta_b` along a deformation; `e_dot` is the second-order
/// term `E_11'` of the family (zero for the family of [`finite_deformation`]
/// with constant `E_11` on the flat model).
#[derive(Clone, Debug)]
pub struct SublaplacianVariation {
    st: PHStructure,
    e: DeformationField,
    e_dot: DeformationField,
}

pub fn delta_b_variations(st: &PHStructure, e: &DeformationField) -> SublaplacianVariation {
    SublaplacianVariation { st: st.clone(), e: e.clone(), e_dot: DeformationField::zero() }
}

impl SublaplacianVariation {
    pub fn with_e_dot(mut self, e_dot: DeformationField) -> Self {
        self.e_dot = e_dot;
        self
    }

    /// `Delta_b' f`, from `-Delta_b' f = 2i (E_11 f,_{1bar 1bar} + E_11,_1bar f,_1bar) + conj`.
    ///
    /// Frame derivatives `Z1bar Z1bar f` are replaced by covariant ones; the
    /// two agree on the flat model and only the covariant form matches finite
    /// differences of [`finite_deformation`] on curved bases.
    pub fn first(&self, f: &ScalarField) -> ScalarField {
        let extra = vec![self.e.e11.clone()];
        with_fields(&self.st, f, extra, &format!("Delta_b'({})", f.name()), |loc, fj, ex| {
            let a = first_half(loc, &ex[0], fj);
            let b = first_half_conj(loc, &ex[0], fj);
            (&a + &b).scale(-1.0)
        })
    }

    /// `Delta_b'' f`, from the second differentiation of the first variation
    /// (valid on torsion-free bases), with covariant derivatives of `f` as in
    /// [`first`](Self::first).
    pub fn second(&self, f: &ScalarField) -> ScalarField {
        let extra = vec![self.e.e11.clone(), self.e_dot.e11.clone()];
        with_fields(&self.st, f, extra, &format!("Delta_b''({})", f.name()), |loc, fj, ex| {
            second_jet(loc, &ex[0], &ex[1], fj).scale(-1.0)
        })
    }
}

/// Second-order operator field: the structure at order `n + 3`, `f` and the
/// coefficient fields at order `n + 2`.
fn with_fields(
    st: &PHStructure,
    f: &ScalarField,
    extra: Vec<ScalarField>,
    name: &str,
    g: impl Fn(&Local, &Jet, &[Jet]) -> Jet + Send + Sync + 'static,
) -> ScalarField {
    let cf = st.coframe().clone();
    let f = f.clone();
    let domain = extra.iter().fold(st.domain().and(f.domain()), |d, e| d.and(e.domain()));
    ScalarField::from_jet_fn(name, domain, move |p, n| {
        let loc = Local::new(&cf, p, n + 3)?;
        let fj = f.jet(p, n + 2)?;
        let ex = extra.iter().map(|e| e.jet(p, n + 2)).collect::<Result<Vec<_>>>()?;
        Ok(g(&loc, &fj, &ex).truncate(n))
    })
}

fn first_half(loc: &Local, ej: &Jet, fj: &Jet) -> Jet {
    let i2 = Complex64::new(0.0, 2.0);
    let zb = loc.cov(fj, 0, &[OneBar]);
    let zbzb = loc.cov(fj, 0, &[OneBar, OneBar]);
    let e1b = loc.cov(ej, 2, &[OneBar]);
    let n = zbzb.order();
    (&(&ej.truncate(n) * &zbzb) + &(&e1b.truncate(n) * &zb.truncate(n))).scale(i2)
}

fn first_half_conj(loc: &Local, ej: &Jet, fj: &Jet) -> Jet {
    let i2 = Complex64::new(0.0, 2.0);
    let eb = ej.conj();
    let z = loc.cov(fj, 0, &[One]);
    let zz = loc.cov(fj, 0, &[One, One]);
    let eb1 = loc.cov(&eb, -2, &[One]);
    let n = zz.order();
    (&(&eb.truncate(n) * &zz) + &(&eb1.truncate(n) * &z.truncate(n))).scale(-i2)
}

/// `-Delta_b''` applied to `f`.
fn second_jet(loc: &Local, ej: &Jet, ed: &Jet, fj: &Jet) -> Jet {
    let i2 = Complex64::new(0.0, 2.0);
    let z = loc.cov(fj, 0, &[One]);
    let zb = loc.cov(fj, 0, &[OneBar]);
    let zz = loc.cov(fj, 0, &[One, One]);
    let zbzb = loc.cov(fj, 0, &[OneBar, OneBar]);
    let n = zz.order();
    let (z, zb) = (z.truncate(n), zb.truncate(n));
    let t = |j: Jet| j.truncate(n);

    let eb = ej.conj();
    let edb = ed.conj();
    let e1 = t(loc.cov(ej, 2, &[One]));
    let e1b = t(loc.cov(ej, 2, &[OneBar]));
    let eb1 = t(loc.cov(&eb, -2, &[One]));
    let eb1b = t(loc.cov(&eb, -2, &[OneBar]));
    let ed1b = t(loc.cov(ed, 2, &[OneBar]));
    let edb1 = t(loc.cov(&edb, -2, &[One]));
    let (e, eb, ed, edb) = (t(ej.clone()), t(eb), t(ed.clone()), t(edb));
    let lap = ph_calculus::ops::sublaplacian_jet(loc, fj).truncate(n);

    let mut out = (&ed * &zbzb).scale(i2);
    out += &(&edb * &zz).scale(-i2);
    out += &(&(&e * &eb) * &lap).scale(-4.0);
    let cz = &(&e * &eb1b).scale(4.0) + &(&eb * &e1b).scale(6.0);
    out += &(-(&cz * &z));
    let czb = &(&eb * &e1).scale(4.0) + &(&e * &eb1).scale(6.0);
    out += &(-(&czb * &zb));
    out += &(&ed1b * &zb).scale(i2);
    out += &(&edb1 * &z).scale(-i2);
    out
}
