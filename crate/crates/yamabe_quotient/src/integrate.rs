//! Dyadic shells anchored at a fixed radius, so that gluing interfaces at
//! `rho0` and `2 rho0` fall on shell edges.

use heisenberg_core::quad::{geometric_tail, shell_integral, ShellRule};
use heisenberg_core::{Complex64, Error, HPoint, Result};

/// A real integral with a heuristic error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Value {
    pub value: f64,
    pub error: f64,
}

impl Value {
    pub fn new(value: f64, error: f64) -> Self {
        Value { value, error }
    }

    pub fn plus(self, other: Value) -> Value {
        Value::new(self.value + other.value, self.error + other.error)
    }
}

fn tail(shells: &[Complex64]) -> Result<(f64, f64)> {
    let (t, e) = geometric_tail(shells)?;
    Ok((t.re, e))
}

/// `int_{rho <= anchor} f dW`: shells `[anchor 2^-(k+1), anchor 2^-k]` down
/// to `inner`, then a geometric tail towards the origin.
pub fn ball<F>(f: &F, anchor: f64, inner: f64, rule: &ShellRule) -> Result<Value>
where
    F: Fn(&HPoint) -> Result<Complex64> + Sync,
{
    if !(anchor > 0.0 && inner > 0.0 && inner < anchor) {
        return Err(Error::InvalidArgument(format!("ball needs 0 < inner < anchor, got {inner}, {anchor}")));
    }
    let mut shells = Vec::new();
    let mut total = 0.0;
    let mut r = anchor;
    while r > inner * (1.0 + 1e-12) {
        let s = shell_integral(f, 0.5 * r, r, rule)?;
        total += s.re;
        shells.push(s);
        r *= 0.5;
    }
    let (t, e) = tail(&shells)?;
    Ok(Value::new(total + t, e))
}

/// `int_{rho >= anchor} f dW`: shells `[anchor 2^k, anchor 2^(k+1)]` out to
/// `outer`, then a geometric tail towards infinity.
pub fn exterior<F>(f: &F, anchor: f64, outer: f64, rule: &ShellRule) -> Result<Value>
where
    F: Fn(&HPoint) -> Result<Complex64> + Sync,
{
    if !(anchor > 0.0 && outer > anchor) {
        return Err(Error::InvalidArgument(format!("exterior needs 0 < anchor < outer, got {anchor}, {outer}")));
    }
    let mut shells = Vec::new();
    let mut total = 0.0;
    let mut r = anchor;
    while r < outer * (1.0 - 1e-12) {
        let s = shell_integral(f, r, 2.0 * r, rule)?;
        total += s.re;
        shells.push(s);
        r *= 2.0;
    }
    let (t, e) = tail(&shells)?;
    Ok(Value::new(total + t, e))
}

/// Whole-space integral split at `anchor`.
pub fn whole<F>(f: &F, anchor: f64, inner: f64, outer: f64, rule: &ShellRule) -> Result<Value>
where
    F: Fn(&HPoint) -> Result<Complex64> + Sync,
{
    Ok(ball(f, anchor, inner, rule)?.plus(exterior(f, anchor, outer, rule)?))
}
