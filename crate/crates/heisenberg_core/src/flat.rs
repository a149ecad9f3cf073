//! The standard structure of the Heisenberg group: `Z1 = (d_z + i zbar d_t)/sqrt 2`,
//! `T = d_t`, `theta = dt + i z dzbar - i zbar dz`, `theta1 = sqrt 2 dz`.

use num_complex::Complex64;

use crate::field::ScalarField;
use crate::jet::{Axis, Jet};
use crate::point::HPoint;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Applies the vector field `sum v[i] d_i` to `f`; the result has the lower of
/// the two available orders.
pub fn apply_vector(v: &[Jet; 3], f: &Jet) -> Jet {
    let mut acc = &v[0] * &f.deriv(Axis::X);
    acc += &(&v[1] * &f.deriv(Axis::Y));
    acc += &(&v[2] * &f.deriv(Axis::T));
    acc
}

/// `d_z f = (f_x - i f_y)/2`
pub fn d_z(f: &Jet) -> Jet {
    (&f.deriv(Axis::X) - &f.deriv(Axis::Y).scale(Complex64::i())).scale(0.5)
}

/// `d_zbar f = (f_x + i f_y)/2`
pub fn d_zbar(f: &Jet) -> Jet {
    (&f.deriv(Axis::X) + &f.deriv(Axis::Y).scale(Complex64::i())).scale(0.5)
}

/// Components of the flat `Z1` on `(d_x, d_y, d_t)` at `p`.
pub fn z1_vector(p: &HPoint, order: usize) -> [Jet; 3] {
    let x = Jet::variable(order, p.x, Axis::X);
    let y = Jet::variable(order, p.y, Axis::Y);
    let s = FRAC_1_SQRT_2;
    // i zbar = y + i x
    let it = (&y + &x.scale(Complex64::i())).scale(s);
    [Jet::constant(order, 0.5 * s), Jet::constant(order, Complex64::new(0.0, -0.5 * s)), it]
}

pub fn z1bar_vector(p: &HPoint, order: usize) -> [Jet; 3] {
    let [a, b, c] = z1_vector(p, order);
    [a.conj(), b.conj(), c.conj()]
}

pub fn z1_jet(p: &HPoint, f: &Jet) -> Jet {
    apply_vector(&z1_vector(p, f.order().saturating_sub(1)), f)
}

pub fn z1bar_jet(p: &HPoint, f: &Jet) -> Jet {
    apply_vector(&z1bar_vector(p, f.order().saturating_sub(1)), f)
}

pub fn t_jet(f: &Jet) -> Jet {
    f.deriv(Axis::T)
}

/// Flat sublaplacian `Z1 Z1bar f + Z1bar Z1 f`; consumes two orders.
pub fn sublaplacian_jet(p: &HPoint, f: &Jet) -> Jet {
    &z1_jet(p, &z1bar_jet(p, f)) + &z1bar_jet(p, &z1_jet(p, f))
}

/// Flat Kohn Laplacian `-Delta_b f + i T f`.
pub fn kohn_box_jet(p: &HPoint, f: &Jet) -> Jet {
    &(-sublaplacian_jet(p, f)) + &t_jet(f).truncate(f.order() - 2).scale(Complex64::i())
}

fn lift(f: &ScalarField, label: &str, extra: usize, op: fn(&HPoint, &Jet) -> Jet) -> ScalarField {
    f.map_jet(&format!("{label}({})", f.name()), extra, move |p, j| Ok(op(p, j)))
}

pub fn flat_z1(f: &ScalarField) -> ScalarField {
    lift(f, "Z1", 1, z1_jet)
}

pub fn flat_z1bar(f: &ScalarField) -> ScalarField {
    lift(f, "Z1bar", 1, z1bar_jet)
}

pub fn flat_t(f: &ScalarField) -> ScalarField {
    lift(f, "T", 1, |_, j| t_jet(j))
}

pub fn flat_sublaplacian(f: &ScalarField) -> ScalarField {
    lift(f, "Delta_b", 2, sublaplacian_jet)
}

pub fn flat_kohn_box(f: &ScalarField) -> ScalarField {
    lift(f, "Box_b", 2, kohn_box_jet)
}

/// `|grad_b f|^2 = 2 |Z1 f|^2` for real `f`.
pub fn flat_grad_norm_sq(f: &ScalarField) -> ScalarField {
    lift(f, "|grad_b|^2", 1, |p, j| {
        let z = z1_jet(p, j);
        (&z * &z.conj()).scale(2.0)
    })
}

/// Coefficients `(dx, dy, dt)` of the standard contact form
/// `theta0 = dt + 2x dy - 2y dx` at the given order.
pub fn theta0_coeffs(p: &HPoint, order: usize) -> [Jet; 3] {
    [
        Jet::variable(order, p.y, Axis::Y).scale(-2.0),
        Jet::variable(order, p.x, Axis::X).scale(2.0),
        Jet::constant(order, 1.0),
    ]
}

/// Coefficients of `sqrt 2 dz`.
pub fn theta1_flat_coeffs(order: usize) -> [Jet; 3] {
    let s = std::f64::consts::SQRT_2;
    [Jet::constant(order, s), Jet::constant(order, Complex64::new(0.0, s)), Jet::zero(order)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Coords, Domain};

    fn rho_inv_sq() -> ScalarField {
        ScalarField::closed_form("rho^-2", Domain::rho_positive(), |c| c.rho2().recip())
    }

    #[test]
    fn z1_of_z_is_constant() {
        let z = ScalarField::closed_form("z", Domain::everywhere(), Coords::z);
        for p in [HPoint::new(0.3, -2.0, 1.0), HPoint::new(5.0, 1.0, -3.0)] {
            let v = flat_z1(&z).value(&p).unwrap();
            assert!((v - FRAC_1_SQRT_2).norm() < 1e-15);
            assert!(flat_z1bar(&z).value(&p).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn z1_of_rho_inv_sq() {
        let f = flat_z1(&rho_inv_sq());
        for p in [HPoint::new(0.7, 0.2, -0.4), HPoint::new(-1.5, 2.0, 3.0)] {
            let w = Complex64::new(p.r2(), p.t);
            let rho6 = (p.r2() * p.r2() + p.t * p.t).powf(1.5);
            let expected = -FRAC_1_SQRT_2 * p.z().conj() * w / rho6;
            assert!((f.value(&p).unwrap() - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn rho_inv_sq_is_harmonic() {
        let f = flat_sublaplacian(&rho_inv_sq());
        for i in 0..50 {
            let s = i as f64;
            let p = HPoint::new((s * 0.37).sin() * 2.0, (s * 0.71).cos() * 1.5, (s * 1.3).sin() * 3.0 + 0.1);
            let scale = rho_inv_sq().value(&p).unwrap().norm().powi(2);
            assert!(f.value(&p).unwrap().norm() < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn zbar_is_anti_cr() {
        let zb = ScalarField::closed_form("zbar", Domain::everywhere(), Coords::zbar);
        let b = flat_kohn_box(&zb);
        assert!(b.value(&HPoint::new(0.4, 0.9, -1.2)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn frame_is_dual_to_coframe() {
        let p = HPoint::new(0.3, -0.8, 2.0);
        let th = theta0_coeffs(&p, 0);
        let th1 = theta1_flat_coeffs(0);
        let z1 = z1_vector(&p, 0);
        let pair = |a: &[Jet; 3], v: &[Jet; 3]| (0..3).map(|i| a[i].value() * v[i].value()).sum::<Complex64>();
        assert!(pair(&th, &z1).norm() < 1e-15);
        assert!((pair(&th1, &z1) - 1.0).norm() < 1e-15);
        assert!(pair(&th1, &z1bar_vector(&p, 0)).norm() < 1e-15);
    }
}
