//! One-forms and admissible coframes `(theta, theta1)`.

use std::fmt;
use std::sync::Arc;

use heisenberg_core::flat::{theta0_coeffs, theta1_flat_coeffs};
use heisenberg_core::{Complex64, Domain, Error, HPoint, Jet, Result, ScalarField};

/// `a_z dz + a_zbar dzbar + a_t dt` with field coefficients.
#[derive(Clone, Debug)]
pub struct OneForm {
    pub dz: ScalarField,
    pub dzbar: ScalarField,
    pub dt: ScalarField,
}

impl OneForm {
    pub fn new(dz: ScalarField, dzbar: ScalarField, dt: ScalarField) -> Self {
        OneForm { dz, dzbar, dt }
    }

    pub fn zero() -> Self {
        OneForm::new(ScalarField::zero(), ScalarField::zero(), ScalarField::zero())
    }

    /// Coefficients on `(dx, dy, dt)`.
    pub fn real_jets(&self, p: &HPoint, order: usize) -> Result<[Jet; 3]> {
        let (a, b) = (self.dz.jet(p, order)?, self.dzbar.jet(p, order)?);
        Ok([&a + &b, (&a - &b).scale(Complex64::i()), self.dt.jet(p, order)?])
    }

    /// Builds a form from a `(dx, dy, dt)` evaluator.
    pub fn from_real(name: &str, domain: Domain, eval: impl Fn(&HPoint, usize) -> Result<[Jet; 3]> + Send + Sync + 'static) -> Self {
        let eval = Arc::new(eval);
        let (e1, e2, e3) = (eval.clone(), eval.clone(), eval);
        let dz = ScalarField::from_jet_fn(&format!("{name}.dz"), domain.clone(), move |p, k| {
            let [x, y, _] = e1(p, k)?;
            Ok((&x - &y.scale(Complex64::i())).scale(0.5))
        });
        let dzbar = ScalarField::from_jet_fn(&format!("{name}.dzbar"), domain.clone(), move |p, k| {
            let [x, y, _] = e2(p, k)?;
            Ok((&x + &y.scale(Complex64::i())).scale(0.5))
        });
        let dt = ScalarField::from_jet_fn(&format!("{name}.dt"), domain, move |p, k| {
            let [_, _, t] = e3(p, k)?;
            Ok(t)
        });
        OneForm { dz, dzbar, dt }
    }

    /// The form applied to a real vector `(vx, vy, vt)` at `p`.
    pub fn on_vector(&self, p: &HPoint, v: [f64; 3]) -> Result<Complex64> {
        let j = self.real_jets(p, 0)?;
        Ok(j[0].value() * v[0] + j[1].value() * v[1] + j[2].value() * v[2])
    }
}

/// Coefficient jets of `theta` and `theta1` on `(dx, dy, dt)`.
#[derive(Clone, Debug)]
pub struct CoframeJets {
    pub theta: [Jet; 3],
    pub theta1: [Jet; 3],
}

impl CoframeJets {
    pub fn order(&self) -> usize {
        self.theta.iter().chain(&self.theta1).map(Jet::order).min().unwrap_or(0)
    }
}

type CoframeEval = Arc<dyn Fn(&HPoint, usize) -> Result<CoframeJets> + Send + Sync>;

/// A coframe `(theta, theta1)` on a chart of `H1`; `theta1bar` is implied.
#[derive(Clone)]
pub struct Coframe {
    name: Arc<str>,
    domain: Domain,
    eval: CoframeEval,
}

impl fmt::Debug for Coframe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coframe").field("name", &self.name).field("domain", &self.domain).finish()
    }
}

impl Coframe {
    pub fn new(name: &str, domain: Domain, eval: impl Fn(&HPoint, usize) -> Result<CoframeJets> + Send + Sync + 'static) -> Self {
        Coframe { name: name.into(), domain, eval: Arc::new(eval) }
    }

    /// The standard structure `theta0`, `sqrt 2 dz`.
    pub fn flat() -> Self {
        Coframe::new("flat", Domain::everywhere(), |p, k| {
            Ok(CoframeJets { theta: theta0_coeffs(p, k), theta1: theta1_flat_coeffs(k) })
        })
    }

    /// Coframe from field-valued forms.
    pub fn from_forms(name: &str, theta: OneForm, theta1: OneForm) -> Self {
        let domain = [&theta.dz, &theta.dzbar, &theta.dt, &theta1.dz, &theta1.dzbar, &theta1.dt]
            .iter()
            .fold(Domain::everywhere(), |d, f| d.and(f.domain()));
        Coframe::new(name, domain, move |p, k| {
            Ok(CoframeJets { theta: theta.real_jets(p, k)?, theta1: theta1.real_jets(p, k)? })
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn jets(&self, p: &HPoint, order: usize) -> Result<CoframeJets> {
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
        Ok(j)
    }

    pub fn theta(&self) -> OneForm {
        let cf = self.clone();
        OneForm::from_real(&format!("{}.theta", self.name), self.domain.clone(), move |p, k| Ok(cf.jets(p, k)?.theta))
    }

    pub fn theta1(&self) -> OneForm {
        let cf = self.clone();
        OneForm::from_real(&format!("{}.theta1", self.name), self.domain.clone(), move |p, k| Ok(cf.jets(p, k)?.theta1))
    }
}
