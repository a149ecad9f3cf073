//! Points of the Heisenberg group and the maps acting on them.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point `(z, t)` of the Heisenberg group, `z = x + iy`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.t)
    }
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint { x: 0.0, y: 0.0, t: 0.0 };

    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        HPoint { x, y, t }
    }

    pub fn from_zt(z: Complex64, t: f64) -> Self {
        HPoint { x: z.re, y: z.im, t }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn r2(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.t.is_finite()
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.t]
    }
}

/// Group law `(a, s)(b, u) = (a + b, s + u + 2 Im(a conj(b)))`.
///
/// This is the sign for which `(d_z + i zbar d_t)/sqrt 2` is left invariant
/// and `W^-1 Z = (z - w, t - s - 2 Im(conj(z) w))`.
pub fn group_mul(p: &HPoint, q: &HPoint) -> HPoint {
    let cross = p.y * q.x - p.x * q.y;
    HPoint::new(p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * cross)
}

pub fn group_inv(p: &HPoint) -> HPoint {
    HPoint::new(-p.x, -p.y, -p.t)
}

/// Heisenberg dilation `(z, t) -> (lambda z, lambda^2 t)`.
pub fn dilate(lambda: f64, p: &HPoint) -> Result<HPoint> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {lambda}")));
    }
    Ok(HPoint::new(lambda * p.x, lambda * p.y, lambda * lambda * p.t))
}

/// Homogeneous gauge `(|z|^4 + t^2)^(1/4)`.
pub fn gauge_rho(p: &HPoint) -> f64 {
    let r2 = p.r2();
    (r2 * r2 + p.t * p.t).sqrt().sqrt()
}

/// CR inversion `z* = z / v`, `t* = -t / |v|^2` with `v = t + i|z|^2`.
pub fn cr_invert(p: &HPoint) -> Result<HPoint> {
    let v = Complex64::new(p.t, p.r2());
    let n2 = v.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::Singular { what: "CR inversion", point: *p });
    }
    Ok(HPoint::from_zt(p.z() / v, -p.t / n2))
}

/// Inverse of [`cr_invert`]: `z = -z*/v*`, `t = -t*/|v*|^2`.
///
/// `cr_invert` is not an involution; applying it twice gives the rotation
/// `(z, t) -> (-z, t)` because `v v* = -1`.
pub fn cr_uninvert(p: &HPoint) -> Result<HPoint> {
    let q = cr_invert(p)?;
    Ok(HPoint::new(-q.x, -q.y, q.t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &HPoint, b: &HPoint, tol: f64) -> bool {
        (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol && (a.t - b.t).abs() <= tol
    }

    #[test]
    fn identity_and_quoted_difference() {
        let q = HPoint::new(1.0, 2.0, 3.0);
        assert_eq!(group_mul(&HPoint::ORIGIN, &q), q);
        // oracle: W^-1 Z = (z - w, t - s - 2 Im(conj(z) w))
        let w = HPoint::new(1.0, 0.0, 0.0);
        let z = HPoint::new(1.0, 1.0, 5.0);
        let oracle_t = z.t - w.t - 2.0 * (z.z().conj() * w.z()).im;
        let got = group_mul(&group_inv(&w), &z);
        assert_eq!(got, HPoint::new(0.0, 1.0, oracle_t));
        assert_eq!(got, HPoint::new(0.0, 1.0, 7.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(group_inv(&HPoint::ORIGIN), HPoint::ORIGIN);
        assert_eq!(group_inv(&HPoint::new(1.0, 0.0, 0.0)), HPoint::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(gauge_rho(&HPoint::new(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(gauge_rho(&HPoint::new(0.0, 0.0, 1.0)), 1.0);
        assert!((gauge_rho(&HPoint::new(1.0, 1.0, 2.0)) - 8f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn dilation_examples() {
        let p = HPoint::new(1.0, 0.0, 1.0);
        assert_eq!(dilate(2.0, &p).unwrap(), HPoint::new(2.0, 0.0, 4.0));
        assert_eq!(dilate(1.0, &p).unwrap(), p);
        assert!(dilate(0.0, &p).is_err());
        assert!(dilate(-1.0, &p).is_err());
    }

    #[test]
    fn inversion_examples() {
        let p = cr_invert(&HPoint::new(1.0, 0.0, 0.0)).unwrap();
        assert!(close(&p, &HPoint::new(0.0, -1.0, 0.0), 1e-15));
        let q = HPoint::new(2.0, 0.0, 0.0);
        assert!((gauge_rho(&cr_invert(&q).unwrap()) - 0.5).abs() < 1e-15);
        assert!(cr_invert(&HPoint::ORIGIN).is_err());
    }

    fn pt() -> impl Strategy<Value = HPoint> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, t)| HPoint::new(x, y, t))
    }

    proptest! {
        #[test]
        fn inverse_law(p in pt()) {
            prop_assert!(close(&group_mul(&p, &group_inv(&p)), &HPoint::ORIGIN, 0.0));
            prop_assert_eq!(group_inv(&group_inv(&p)), p);
        }

        #[test]
        fn associativity(a in pt(), b in pt(), c in pt()) {
            let l = group_mul(&group_mul(&a, &b), &c);
            let r = group_mul(&a, &group_mul(&b, &c));
            prop_assert!(close(&l, &r, 1e-12));
        }

        #[test]
        fn gauge_homogeneity(p in pt(), lambda in 0.1..10.0f64) {
            let scaled = gauge_rho(&dilate(lambda, &p).unwrap());
            prop_assert!((scaled - lambda * gauge_rho(&p)).abs() <= 1e-12 * (1.0 + scaled));
        }

        #[test]
        fn inversion_roundtrip(p in pt()) {
            prop_assume!(gauge_rho(&p) > 1e-2);
            let tol = 1e-10 * (1.0 + gauge_rho(&p).powi(2));
            let back = cr_uninvert(&cr_invert(&p).unwrap()).unwrap();
            prop_assert!(close(&back, &p, tol));
            // applying the inversion twice rotates z by pi
            let twice = cr_invert(&cr_invert(&p).unwrap()).unwrap();
            prop_assert!(close(&twice, &HPoint::new(-p.x, -p.y, p.t), tol));
            let r = gauge_rho(&p) * gauge_rho(&cr_invert(&p).unwrap());
            prop_assert!((r - 1.0).abs() < 1e-12);
        }
    }
}
