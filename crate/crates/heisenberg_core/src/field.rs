//! Jet-evaluable scalar fields with declared domains.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Axis, Jet};
use crate::point::{gauge_rho, HPoint};

/// Coordinate jets at a base point, with the usual complex combinations.
#[derive(Clone, Debug)]
pub struct Coords {
    pub point: HPoint,
    pub x: Jet,
    pub y: Jet,
    pub t: Jet,
}

impl Coords {
    pub fn new(point: &HPoint, order: usize) -> Self {
        Coords {
            point: *point,
            x: Jet::variable(order, point.x, Axis::X),
            y: Jet::variable(order, point.y, Axis::Y),
            t: Jet::variable(order, point.t, Axis::T),
        }
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    pub fn constant(&self, v: impl Into<Complex64>) -> Jet {
        Jet::constant(self.order(), v)
    }

    pub fn z(&self) -> Jet {
        &self.x + &self.y.scale(Complex64::i())
    }

    pub fn zbar(&self) -> Jet {
        &self.x - &self.y.scale(Complex64::i())
    }

    /// `|z|^2`
    pub fn r2(&self) -> Jet {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    /// `rho^4 = |z|^4 + t^2`
    pub fn rho4(&self) -> Jet {
        let r2 = self.r2();
        &(&r2 * &r2) + &(&self.t * &self.t)
    }

    /// `rho^2 = sqrt(|z|^4 + t^2)`
    pub fn rho2(&self) -> Jet {
        self.rho4().sqrt()
    }

    pub fn rho(&self) -> Jet {
        self.rho4().powf(0.25)
    }

    /// `v = t + i|z|^2`
    pub fn v(&self) -> Jet {
        &self.t + &self.r2().scale(Complex64::i())
    }

    /// `w = |z|^2 + it`
    pub fn w(&self) -> Jet {
        &self.r2() + &self.t.scale(Complex64::i())
    }
}

/// Region of validity of a field, declared rather than detected.
#[derive(Clone)]
pub struct Domain {
    note: Arc<str>,
    pred: Arc<dyn Fn(&HPoint) -> bool + Send + Sync>,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.note)
    }
}

impl Domain {
    pub fn new(note: &str, pred: impl Fn(&HPoint) -> bool + Send + Sync + 'static) -> Self {
        Domain { note: note.into(), pred: Arc::new(pred) }
    }

    pub fn everywhere() -> Self {
        Self::new("all of H1", |_| true)
    }

    pub fn rho_positive() -> Self {
        Self::new("rho > 0", |p| gauge_rho(p) > 0.0)
    }

    pub fn rho_above(rho0: f64) -> Self {
        Self::new(&format!("rho > {rho0}"), move |p| gauge_rho(p) > rho0)
    }

    pub fn z_nonzero() -> Self {
        Self::new("z != 0", |p| p.x != 0.0 || p.y != 0.0)
    }

    pub fn t_nonzero() -> Self {
        Self::new("t != 0", |p| p.t != 0.0)
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        (self.pred)(p)
    }

    pub fn and(&self, other: &Domain) -> Domain {
        if self.note.as_ref() == "all of H1" {
            return other.clone();
        }
        if other.note.as_ref() == "all of H1" || self.note == other.note {
            return self.clone();
        }
        let (a, b) = (self.pred.clone(), other.pred.clone());
        Domain {
            note: format!("{} and {}", self.note, other.note).into(),
            pred: Arc::new(move |p| a(p) && b(p)),
        }
    }
}

type Eval = Arc<dyn Fn(&HPoint, usize) -> Result<Jet> + Send + Sync>;

/// A complex function on a chart of the Heisenberg group that can be
/// expanded to any jet order at any point of its domain.
#[derive(Clone)]
pub struct ScalarField {
    name: Arc<str>,
    domain: Domain,
    eval: Eval,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("name", &self.name).field("domain", &self.domain).finish()
    }
}

impl ScalarField {
    /// Field given by a raw jet evaluator; the domain check is done before
    /// the evaluator runs.
    pub fn from_jet_fn(
        name: &str,
        domain: Domain,
        eval: impl Fn(&HPoint, usize) -> Result<Jet> + Send + Sync + 'static,
    ) -> Self {
        ScalarField { name: name.into(), domain, eval: Arc::new(eval) }
    }

    /// Field written as a closed-form expression in the coordinate jets.
    pub fn closed_form(name: &str, domain: Domain, f: impl Fn(&Coords) -> Jet + Send + Sync + 'static) -> Self {
        Self::from_jet_fn(name, domain, move |p, k| Ok(f(&Coords::new(p, k))))
    }

    pub fn constant(v: impl Into<Complex64>) -> Self {
        let v = v.into();
        Self::from_jet_fn(&format!("{v}"), Domain::everywhere(), move |_, k| Ok(Jet::constant(k, v)))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn jet(&self, p: &HPoint, order: usize) -> Result<Jet> {
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain {
                field: self.name.to_string(),
                domain: self.domain.note().to_string(),
                point: *p,
            });
        }
        let j = (self.eval)(p, order)?;
        if j.order() < order {
            return Err(Error::JetExhausted { have: j.order(), need: order });
        }
        Ok(j.truncate(order))
    }

    pub fn value(&self, p: &HPoint) -> Result<Complex64> {
        Ok(self.jet(p, 0)?.value())
    }

    /// Applies a jet-to-jet map; `extra` is how many orders the map consumes.
    pub fn map_jet(&self, name: &str, extra: usize, f: impl Fn(&HPoint, &Jet) -> Result<Jet> + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Self::from_jet_fn(name, self.domain.clone(), move |p, k| {
            let j = inner.jet(p, k + extra)?;
            f(p, &j)
        })
    }

    /// Pointwise combination of two fields on the intersection of their domains.
    pub fn zip(&self, other: &ScalarField, name: &str, f: impl Fn(&Jet, &Jet) -> Jet + Send + Sync + 'static) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::from_jet_fn(name, self.domain.and(&other.domain), move |p, k| Ok(f(&a.jet(p, k)?, &b.jet(p, k)?)))
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.zip(other, &format!("({} + {})", self.name, other.name), |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        self.zip(other, &format!("({} - {})", self.name, other.name), |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        self.zip(other, &format!("{} * {}", self.name, other.name), |a, b| a * b)
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        self.map_jet(&format!("{s} * {}", self.name), 0, move |_, j| Ok(j.scale(s)))
    }

    pub fn conj(&self) -> Self {
        self.map_jet(&format!("conj({})", self.name), 0, |_, j| Ok(j.conj()))
    }

    pub fn exp(&self) -> Self {
        self.map_jet(&format!("exp({})", self.name), 0, |_, j| Ok(j.exp()))
    }

    pub fn ln(&self) -> Self {
        self.map_jet(&format!("ln({})", self.name), 0, |_, j| Ok(j.ln()))
    }

    pub fn powf(&self, a: f64) -> Self {
        self.map_jet(&format!("{}^{a}", self.name), 0, move |_, j| Ok(j.powf(a)))
    }

    /// Pulls the field back along a smooth map of the group whose coordinate
    /// functions are given as closed-form jets.
    pub fn pullback(&self, name: &str, domain: Domain, map: impl Fn(&Coords) -> [Jet; 3] + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Self::from_jet_fn(name, domain, move |p, k| {
            let img = map(&Coords::new(p, k));
            let q = HPoint::new(img[0].value().re, img[1].value().re, img[2].value().re);
            let outer = inner.jet(&q, k)?;
            Ok(compose_jet(&outer, &img))
        })
    }

    /// Central finite-difference check of the first and second partials
    /// against the jet; returns the largest discrepancy.
    pub fn fd_check(&self, p: &HPoint, h: f64) -> Result<f64> {
        let j = self.jet(p, 2)?;
        let f0 = j.value();
        let mut worst: f64 = 0.0;
        for axis in Axis::ALL {
            let mut e = [0.0; 3];
            e[axis as usize] = h;
            let plus = self.value(&HPoint::new(p.x + e[0], p.y + e[1], p.t + e[2]))?;
            let minus = self.value(&HPoint::new(p.x - e[0], p.y - e[1], p.t - e[2]))?;
            let mut idx = [0; 3];
            idx[axis as usize] = 1;
            worst = worst.max(((plus - minus) / (2.0 * h) - j.partial(idx)).norm());
            idx[axis as usize] = 2;
            worst = worst.max(((plus - f0 * 2.0 + minus) / (h * h) - j.partial(idx)).norm());
        }
        Ok(worst)
    }
}

/// Composes a jet of `F` at `q = map(p)` with the jets of the map at `p`.
pub fn compose_jet(outer: &Jet, map: &[Jet; 3]) -> Jet {
    let k = outer.order().min(map[0].order());
    let deltas: Vec<Jet> = map.iter().map(|m| m.truncate(k).add_const(-m.value())).collect();
    let mut out = Jet::zero(k);
    // powers[axis][n] = delta_axis^n
    let powers: Vec<Vec<Jet>> = deltas
        .iter()
        .map(|d| {
            let mut v = vec![Jet::constant(k, 1.0)];
            for n in 1..=k {
                let next = &v[n - 1] * d;
                v.push(next);
            }
            v
        })
        .collect();
    for e in Jet::multi_indices(k) {
        let c = outer.coeff([e[0] as usize, e[1] as usize, e[2] as usize]);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let term = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize]) * &powers[2][e[2] as usize];
        out += &term.scale(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_matches_value() {
        let f = ScalarField::closed_form("rho^-2", Domain::rho_positive(), |c| c.rho2().recip());
        let p = HPoint::new(0.4, -1.1, 0.7);
        let direct = 1.0 / (p.r2() * p.r2() + p.t * p.t).sqrt();
        assert!((f.value(&p).unwrap().re - direct).abs() < 1e-15);
        assert!(f.fd_check(&p, 1e-4).unwrap() < 1e-6);
    }

    #[test]
    fn domain_is_enforced() {
        let f = ScalarField::closed_form("1/z", Domain::z_nonzero(), |c| c.z().recip());
        assert!(matches!(f.value(&HPoint::new(0.0, 0.0, 1.0)), Err(Error::OutOfDomain { .. })));
        assert!(f.value(&HPoint::new(1.0, 0.0, 1.0)).is_ok());
    }

    #[test]
    fn pullback_matches_direct_composition() {
        let f = ScalarField::closed_form("x t", Domain::everywhere(), |c| &c.x * &c.t);
        let g = f.pullback("x t after dilation", Domain::everywhere(), |c| {
            [c.x.scale(2.0), c.y.scale(2.0), c.t.scale(4.0)]
        });
        let direct = ScalarField::closed_form("8 x t", Domain::everywhere(), |c| (&c.x * &c.t).scale(8.0));
        let p = HPoint::new(0.3, 0.2, -0.5);
        let (a, b) = (g.jet(&p, 3).unwrap(), direct.jet(&p, 3).unwrap());
        assert!((&a - &b).max_abs() < 1e-14);
    }
}
