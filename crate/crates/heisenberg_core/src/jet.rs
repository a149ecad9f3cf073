//! Truncated Taylor jets in the three real coordinates (x, y, t).
//!
//! A [`Jet`] of order `K` stores the Taylor coefficients `c[a,b,c]` of a
//! complex function around a base point, so that
//! `f(p + h) = sum c[a,b,c] hx^a hy^b ht^c + O(|h|^(K+1))`.
//! Coefficients are laid out by total degree, so truncating to a lower
//! order is a prefix copy.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Highest order for which multiplication tables are built.
pub const MAX_ORDER: usize = 12;

const DIM: usize = MAX_ORDER + 1;

/// Number of monomials of total degree at most `order` in three variables.
pub const fn jet_len(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

struct Tables {
    exps: Vec<[u8; 3]>,
    index: Vec<u16>,
    // (i, j, k) with deg(i) + deg(j) = deg(k); sorted by deg(k) so a prefix
    // of the table serves every lower order.
    mul: Vec<(u16, u16, u16)>,
    mul_end: Vec<usize>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut exps = Vec::with_capacity(jet_len(MAX_ORDER));
        let mut index = vec![u16::MAX; DIM * DIM * DIM];
        for d in 0..=MAX_ORDER {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    let c = d - a - b;
                    index[(a * DIM + b) * DIM + c] = exps.len() as u16;
                    exps.push([a as u8, b as u8, c as u8]);
                }
            }
        }
        let deg = |e: &[u8; 3]| (e[0] + e[1] + e[2]) as usize;
        let mut mul = Vec::new();
        let mut mul_end = Vec::with_capacity(DIM);
        for d in 0..=MAX_ORDER {
            for (k, ek) in exps.iter().enumerate() {
                if deg(ek) != d {
                    continue;
                }
                for (i, ei) in exps.iter().enumerate() {
                    if ei[0] > ek[0] || ei[1] > ek[1] || ei[2] > ek[2] {
                        continue;
                    }
                    let ej = [ek[0] - ei[0], ek[1] - ei[1], ek[2] - ei[2]];
                    let j = index[(ej[0] as usize * DIM + ej[1] as usize) * DIM + ej[2] as usize];
                    mul.push((i as u16, j, k as u16));
                }
            }
            mul_end.push(mul.len());
        }
        Tables { exps, index, mul, mul_end }
    })
}

fn slot(e: [usize; 3]) -> usize {
    tables().index[(e[0] * DIM + e[1]) * DIM + e[2]] as usize
}

/// Coordinate axis of the jet variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X = 0,
    Y = 1,
    T = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::T];
}

/// Truncated Taylor expansion of a complex function of (x, y, t).
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: Vec<Complex64>,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet { order, c: vec![Complex64::new(0.0, 0.0); jet_len(order)] }
    }

    pub fn constant(order: usize, v: impl Into<Complex64>) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = v.into();
        j
    }

    /// The coordinate function along `axis`, with value `base` at the base point.
    pub fn variable(order: usize, base: f64, axis: Axis) -> Self {
        let mut j = Self::constant(order, base);
        if order > 0 {
            let mut e = [0; 3];
            e[axis as usize] = 1;
            j.c[slot(e)] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from Taylor coefficients listed in layout order.
    pub fn from_coeffs(order: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), jet_len(order));
        Jet { order, c: coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// Multi-indices in layout order, up to `order`.
    pub fn multi_indices(order: usize) -> &'static [[u8; 3]] {
        &tables().exps[..jet_len(order)]
    }

    /// Taylor coefficient of `hx^a hy^b ht^c`.
    pub fn coeff(&self, e: [usize; 3]) -> Complex64 {
        if e[0] + e[1] + e[2] > self.order {
            return Complex64::new(0.0, 0.0);
        }
        self.c[slot(e)]
    }

    /// Partial derivative `d^(a+b+c) f / dx^a dy^b dt^c` at the base point.
    pub fn partial(&self, e: [usize; 3]) -> Complex64 {
        let fact = |n: usize| (1..=n).fold(1.0, |acc, k| acc * k as f64);
        self.coeff(e) * (fact(e[0]) * fact(e[1]) * fact(e[2]))
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet { order, c: self.c[..jet_len(order)].to_vec() }
    }

    /// Derivative along `axis`; the result has order one less.
    ///
    /// Panics on an order-0 jet: callers size their jets up front and
    /// report exhaustion through `Error::JetExhausted`.
    pub fn deriv(&self, axis: Axis) -> Jet {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let mut out = Jet::zero(self.order - 1);
        let t = tables();
        for (k, e) in t.exps[..out.c.len()].iter().enumerate() {
            let mut up = [e[0] as usize, e[1] as usize, e[2] as usize];
            up[axis as usize] += 1;
            out.c[k] = self.c[slot(up)] * up[axis as usize] as f64;
        }
        out
    }

    pub fn conj(&self) -> Jet {
        Jet { order: self.order, c: self.c.iter().map(|v| v.conj()).collect() }
    }

    pub fn re(&self) -> Jet {
        Jet { order: self.order, c: self.c.iter().map(|v| Complex64::new(v.re, 0.0)).collect() }
    }

    pub fn im(&self) -> Jet {
        Jet { order: self.order, c: self.c.iter().map(|v| Complex64::new(v.im, 0.0)).collect() }
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Jet {
        let s = s.into();
        Jet { order: self.order, c: self.c.iter().map(|v| v * s).collect() }
    }

    pub fn add_const(&self, s: impl Into<Complex64>) -> Jet {
        let mut out = self.clone();
        out.c[0] += s.into();
        out
    }

    /// Largest coefficient modulus; a cheap norm for residual checks.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    fn mul_into(a: &Jet, b: &Jet, order: usize) -> Jet {
        let t = tables();
        let mut out = Jet::zero(order);
        for &(i, j, k) in &t.mul[..t.mul_end[order]] {
            out.c[k as usize] += a.c[i as usize] * b.c[j as usize];
        }
        out
    }

    /// Evaluates `sum s[n] (f - f(p))^n`, i.e. composes a univariate Taylor
    /// series (coefficients `s[n] = g^(n)(f0)/n!`) with this jet.
    pub fn compose(&self, s: &[Complex64]) -> Jet {
        debug_assert!(s.len() > self.order);
        let mut delta = self.clone();
        delta.c[0] = Complex64::new(0.0, 0.0);
        let mut acc = Jet::constant(self.order, s[self.order]);
        for n in (0..self.order).rev() {
            acc = &acc * &delta;
            acc.c[0] += s[n];
        }
        acc
    }

    pub fn recip(&self) -> Jet {
        let f0 = self.value();
        let inv = 1.0 / f0;
        let mut s = Vec::with_capacity(self.order + 1);
        let mut p = inv;
        for n in 0..=self.order {
            s.push(if n % 2 == 0 { p } else { -p });
            p *= inv;
        }
        self.compose(&s)
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let mut s = Vec::with_capacity(self.order + 1);
        let mut fact = 1.0;
        for n in 0..=self.order {
            if n > 0 {
                fact *= n as f64;
            }
            s.push(e / fact);
        }
        self.compose(&s)
    }

    /// Principal-branch logarithm.
    pub fn ln(&self) -> Jet {
        let f0 = self.value();
        let inv = 1.0 / f0;
        let mut s = vec![f0.ln()];
        let mut p = inv;
        for n in 1..=self.order {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            s.push(p * (sign / n as f64));
            p *= inv;
        }
        self.compose(&s)
    }

    /// Principal-branch complex power with a real exponent.
    pub fn powf(&self, a: f64) -> Jet {
        let f0 = self.value();
        let inv = 1.0 / f0;
        let mut s = Vec::with_capacity(self.order + 1);
        let mut term = f0.powf(a);
        for n in 0..=self.order {
            s.push(term);
            term = term * inv * ((a - n as f64) / (n as f64 + 1.0));
        }
        self.compose(&s)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn powi(&self, n: i32) -> Jet {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut acc = Jet::constant(self.order, 1.0);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn sin(&self) -> Jet {
        self.trig(false)
    }

    pub fn cos(&self) -> Jet {
        self.trig(true)
    }

    fn trig(&self, cosine: bool) -> Jet {
        let f0 = self.value();
        let (sv, cv) = (f0.sin(), f0.cos());
        // derivatives of sin cycle sin, cos, -sin, -cos; cos starts one step later
        let cycle = [sv, cv, -sv, -cv];
        let shift = usize::from(cosine);
        let mut s = Vec::with_capacity(self.order + 1);
        let mut fact = 1.0;
        for n in 0..=self.order {
            if n > 0 {
                fact *= n as f64;
            }
            s.push(cycle[(n + shift) % 4] / fact);
        }
        self.compose(&s)
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = jet_len(order);
        Jet { order, c: (0..n).map(|k| self.c[k] + rhs.c[k]).collect() }
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = jet_len(order);
        Jet { order, c: (0..n).map(|k| self.c[k] - rhs.c[k]).collect() }
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        Jet::mul_into(self, rhs, self.order.min(rhs.order))
    }
}

impl<'a> Div<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self * &rhs.recip()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        if rhs.order < self.order {
            *self = self.truncate(rhs.order);
        }
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
        impl $tr<Complex64> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Complex64) -> Jet {
                let r = Jet::constant(self.order, rhs);
                self.$m(&r)
            }
        }
        impl $tr<Complex64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Complex64) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<f64> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                self.$m(Complex64::new(rhs, 0.0))
            }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                (&self).$m(Complex64::new(rhs, 0.0))
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);
