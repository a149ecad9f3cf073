//! Pointwise solution of the structure equations on jets.
//!
//! At a point the coframe jets give the dual frame by a 3x3 jet inversion.
//! The connection is the ansatz `omega = a theta1 - conj(a) theta1bar + i b theta`
//! with `b` real, matched against `d theta1` on the frame pairs:
//!
//! * `d theta1(Z1, Z1bar) = -conj(a)`
//! * `d theta1(T, Z1) = -i b`
//! * `d theta1(T, Z1bar) = A^1_1bar = A_1bar1bar`
//!
//! and the curvature is `R = d omega(Z1, Z1bar)`.

use heisenberg_core::{Axis, Complex64, Error, HPoint, Jet, Result};

use crate::coframe::{Coframe, CoframeJets};

/// An index of a covariant derivative: `1`, `1bar` or `0` (the Reeb direction).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Idx {
    One,
    OneBar,
    Zero,
}

impl Idx {
    /// Change of the weight `#1 - #1bar` when this index is appended.
    pub fn weight(self) -> i32 {
        match self {
            Idx::One => 1,
            Idx::OneBar => -1,
            Idx::Zero => 0,
        }
    }
}

/// Parses words like `"11b0"`, `"1\u{304}1"` or `"1bar 1"`; a `1` followed by
/// `b`, `bar` or a combining macron is `1bar`.
pub fn parse_word(word: &str) -> Result<Vec<Idx>> {
    let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace() && *c != ',').collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '0' => {
                out.push(Idx::Zero);
                i += 1;
            }
            '1' => {
                let rest: String = chars[i + 1..].iter().collect();
                if rest.starts_with("bar") {
                    out.push(Idx::OneBar);
                    i += 4;
                } else if rest.starts_with('b') || rest.starts_with('\u{304}') {
                    out.push(Idx::OneBar);
                    i += 2;
                } else {
                    out.push(Idx::One);
                    i += 1;
                }
            }
            c => return Err(Error::InvalidArgument(format!("bad index `{c}` in word `{word}`"))),
        }
    }
    Ok(out)
}

pub type Vector = [Jet; 3];
/// 2-form components `(xy, xt, yt)`.
pub type TwoForm = [Jet; 3];

pub fn pair(form: &[Jet; 3], v: &Vector) -> Jet {
    let mut acc = &form[0] * &v[0];
    acc += &(&form[1] * &v[1]);
    acc += &(&form[2] * &v[2]);
    acc
}

pub fn exterior_d(form: &[Jet; 3]) -> TwoForm {
    let d = |i: usize, a: Axis| form[i].deriv(a);
    [
        &d(1, Axis::X) - &d(0, Axis::Y),
        &d(2, Axis::X) - &d(0, Axis::T),
        &d(2, Axis::Y) - &d(1, Axis::T),
    ]
}

pub fn wedge(a: &[Jet; 3], b: &[Jet; 3]) -> TwoForm {
    let c = |i: usize, j: usize| &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
    [c(0, 1), c(0, 2), c(1, 2)]
}

pub fn two_form_on(b: &TwoForm, u: &Vector, v: &Vector) -> Jet {
    let m = |i: usize, j: usize| &(&u[i] * &v[j]) - &(&u[j] * &v[i]);
    let mut acc = &b[0] * &m(0, 1);
    acc += &(&b[1] * &m(0, 2));
    acc += &(&b[2] * &m(1, 2));
    acc
}

fn conj3(v: &[Jet; 3]) -> [Jet; 3] {
    [v[0].conj(), v[1].conj(), v[2].conj()]
}

fn det3(m: &[[Jet; 3]; 3]) -> Jet {
    let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
    let mut d = &m[0][0] * &minor(1, 2);
    d += &(-(&m[0][1] * &minor(0, 2)));
    d += &(&m[0][2] * &minor(0, 1));
    d
}

/// Columns of the inverse of the matrix whose rows are `rows`.
fn inverse_columns(rows: &[[Jet; 3]; 3], p: &HPoint) -> Result<[Vector; 3]> {
    let det = det3(rows);
    if det.value().norm() < 1e-300 {
        return Err(Error::Singular { what: "coframe matrix", point: *p });
    }
    let inv_det = det.recip();
    // cofactor C[i][j] of row i, column j; inverse[j][i] = C[i][j] / det
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &(&rows[r0][c0] * &rows[r1][c1]) - &(&rows[r0][c1] * &rows[r1][c0])
    };
    let col = |i: usize| -> Vector { [&cof(i, 0) * &inv_det, &cof(i, 1) * &inv_det, &cof(i, 2) * &inv_det] };
    Ok([col(0), col(1), col(2)])
}

/// The dual frame `(T, Z1, Z1bar)` of coframe jets, to the same order.
pub fn dual_frame_jets(cj: &CoframeJets, p: &HPoint) -> Result<[Vector; 3]> {
    let rows = [cj.theta.clone(), cj.theta1.clone(), conj3(&cj.theta1)];
    inverse_columns(&rows, p)
}

/// Everything the structure equations determine at one point, as jets.
///
/// With the coframe known to order `K`, the frame is known to order `K`, the
/// connection and torsion to `K - 1` and the curvature to `K - 2`.
#[derive(Clone, Debug)]
pub struct Local {
    pub point: HPoint,
    pub coframe: CoframeJets,
    pub t: Vector,
    pub z1: Vector,
    pub z1bar: Vector,
    /// `omega(Z1)`
    pub conn_a: Jet,
    /// `omega(T) = i b`
    pub conn_b: Jet,
    /// `A_11`
    pub a11: Jet,
    pub r: Jet,
    /// Imaginary part of the fitted `b`; zero for an admissible coframe.
    pub b_imag: Jet,
}

impl Local {
    pub fn new(cf: &Coframe, p: &HPoint, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::JetExhausted { have: order, need: 2 });
        }
        let cj = cf.jets(p, order)?;
        let theta1bar = conj3(&cj.theta1);
        let [t, z1, z1bar] = dual_frame_jets(&cj, p)?;

        let dth1 = exterior_d(&cj.theta1);
        let q1 = two_form_on(&dth1, &z1, &z1bar);
        let q2 = two_form_on(&dth1, &t, &z1);
        let a1b1b = two_form_on(&dth1, &t, &z1bar);
        let conn_a = -q1.conj();
        let b_full = q2.scale(Complex64::i());
        let b = b_full.re();
        let b_imag = b_full.im();

        let ao = order - 1;
        let th = cj.theta.clone().map(|j| j.truncate(ao));
        let th1 = cj.theta1.clone().map(|j| j.truncate(ao));
        let th1b = theta1bar.map(|j| j.truncate(ao));
        let omega: [Jet; 3] = std::array::from_fn(|i| {
            let mut w = &conn_a * &th1[i];
            w += &(-(&conn_a.conj() * &th1b[i]));
            w += &(&b * &th[i]).scale(Complex64::i());
            w
        });
        let r = two_form_on(&exterior_d(&omega), &z1, &z1bar);

        Ok(Local {
            point: *p,
            coframe: cj,
            t,
            z1,
            z1bar,
            conn_a,
            conn_b: b.scale(Complex64::i()),
            a11: a1b1b.conj(),
            r,
            b_imag,
        })
    }

    pub fn order(&self) -> usize {
        self.coframe.order()
    }

    pub fn a1b1b(&self) -> Jet {
        self.a11.conj()
    }

    /// Coefficients of the connection form on `(dx, dy, dt)`.
    pub fn omega(&self) -> [Jet; 3] {
        let ao = self.conn_a.order();
        let th = &self.coframe.theta;
        let th1 = &self.coframe.theta1;
        std::array::from_fn(|i| {
            let mut w = &self.conn_a * &th1[i].truncate(ao);
            w += &(-(&self.conn_a.conj() * &th1[i].conj().truncate(ao)));
            w += &(&self.conn_b * &th[i].truncate(ao));
            w
        })
    }

    fn vector(&self, i: Idx) -> &Vector {
        match i {
            Idx::One => &self.z1,
            Idx::OneBar => &self.z1bar,
            Idx::Zero => &self.t,
        }
    }

    /// `omega(Z1)`, `omega(Z1bar) = -conj(omega(Z1))`, `omega(T)`.
    pub fn omega_on(&self, i: Idx) -> Jet {
        match i {
            Idx::One => self.conn_a.clone(),
            Idx::OneBar => -self.conn_a.conj(),
            Idx::Zero => self.conn_b.clone(),
        }
    }

    /// Frame derivative of a jet along `Z1`, `Z1bar` or `T`.
    pub fn frame_deriv(&self, f: &Jet, i: Idx) -> Jet {
        heisenberg_core::flat::apply_vector(self.vector(i), f)
    }

    /// One covariant derivative of a tensor component of weight
    /// `k = #1 - #1bar`: `c,j = Z_j c - k omega(Z_j) c`.
    pub fn cov_step(&self, c: &Jet, k: i32, i: Idx) -> Jet {
        let d = self.frame_deriv(c, i);
        if k == 0 {
            return d;
        }
        let corr = &self.omega_on(i) * c;
        &d - &corr.scale(k as f64)
    }

    /// Successive covariant derivatives along `word`, left to right.
    pub fn cov(&self, c: &Jet, k: i32, word: &[Idx]) -> Jet {
        let mut cur = c.clone();
        let mut w = k;
        for &i in word {
            cur = self.cov_step(&cur, w, i);
            w += i.weight();
        }
        cur
    }

    /// Largest violation of the duality relations between coframe and frame.
    pub fn duality_residual(&self) -> f64 {
        let th1b = conj3(&self.coframe.theta1);
        let forms = [&self.coframe.theta, &self.coframe.theta1, &th1b];
        let vecs = [&self.t, &self.z1, &self.z1bar];
        let mut worst: f64 = 0.0;
        for (i, f) in forms.iter().enumerate() {
            for (j, v) in vecs.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((pair(f, v).value() - target).norm());
            }
        }
        worst
    }

    /// Residuals of `d theta = i theta1 ^ theta1bar` and of
    /// `d theta1 = theta1 ^ omega + A^1_1bar theta ^ theta1bar`, as the largest
    /// 2-form component at the base point.
    pub fn structure_residuals(&self) -> (f64, f64) {
        let th = &self.coframe.theta;
        let th1 = &self.coframe.theta1;
        let th1b = conj3(th1);
        let dth = exterior_d(th);
        let rhs = wedge(th1, &th1b);
        let admissible = (0..3).map(|i| (dth[i].value() - Complex64::i() * rhs[i].value()).norm()).fold(0.0, f64::max);
        let dth1 = exterior_d(th1);
        let omega = self.omega();
        let w1 = wedge(th1, &omega);
        let w2 = wedge(th, &th1b);
        let a = self.a1b1b().value();
        let structure = (0..3)
            .map(|i| (dth1[i].value() - w1[i].value() - a * w2[i].value()).norm())
            .fold(0.0, f64::max);
        (admissible, structure)
    }

    /// `theta ^ d theta` against `dx dy dt`; non-zero for a contact form.
    pub fn volume_density(&self) -> f64 {
        let th = &self.coframe.theta;
        let d = exterior_d(th);
        // theta ^ d theta = (th_x d_yt - th_y d_xt + th_t d_xy) dx dy dt
        (th[0].value() * d[2].value() - th[1].value() * d[1].value() + th[2].value() * d[0].value()).re
    }
}
