use heisenberg_core::{Complex64, Coords, Domain, Error, ScalarField};
use model_examples::*;
use ph_calculus::residual_report;

#[test]
fn every_name_resolves() {
    for name in EXAMPLE_NAMES {
        assert_eq!(example(name).unwrap().name, name);
    }
    assert!(matches!(example("torus"), Err(Error::InvalidArgument(_))));
}

#[test]
fn structure_and_commutation_residuals() {
    let tensor = ScalarField::closed_form("c", Domain::everywhere(), |c: &Coords| {
        let lin = &(&c.x.scale(0.3) - &c.y.scale(0.2)) + &c.t.scale(0.1);
        (&lin.exp() * &c.z().add_const(Complex64::new(0.5, -1.0))).scale(0.5)
    });
    for name in EXAMPLE_NAMES {
        let ex = example(name).unwrap();
        let st = &ex.structure;
        let rep = residual_report(st, &ex.sample(30, 200), &[(tensor.clone(), 0), (tensor.clone(), 1), (st.torsion(), 2)])
            .unwrap();
        assert!(rep.worst() < 1e-8, "{name}: {rep:?}");
    }
}
