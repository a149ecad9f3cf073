//! The two convolution kernels and their singularity data.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use heisenberg_core::{Complex64, Error, HPoint, Result};

/// `Phi = (1/8 pi^2) log(wbar / w) / wbar` with `w = |z|^2 + it`.
///
/// `wbar / w` has modulus one, so the principal logarithm is `-2i arg w`
/// with `arg w = atan2(t, |z|^2)` in `[-pi/2, pi/2]`. On the axis `z = 0`
/// this returns the limit from `z != 0`.
pub fn kernel_phi(p: &HPoint) -> Result<Complex64> {
    let (r2, t) = (p.r2(), p.t);
    if r2 == 0.0 && t == 0.0 {
        return Err(Error::Singular { what: "kernel Phi", point: *p });
    }
    let log_ratio = Complex64::new(0.0, -2.0 * t.atan2(r2));
    Ok(log_ratio / Complex64::new(r2, -t) / (8.0 * PI * PI))
}

/// `eta_eps^-2` with `eta_eps = |z|^2 + eps^2 - it`.
pub fn kernel_eta(eps: f64, p: &HPoint) -> Result<Complex64> {
    let eta = Complex64::new(p.r2() + eps * eps, -p.t);
    if eta.norm_sqr() == 0.0 {
        return Err(Error::Singular { what: "kernel eta^-2", point: *p });
    }
    Ok((eta * eta).inv())
}

type KernelFn = Arc<dyn Fn(&HPoint) -> Result<Complex64> + Send + Sync>;

/// A convolution kernel with a declared bound
/// `|k(Z)| <= C rho^-p (1 + |log rho|)` near the origin.
#[derive(Clone)]
pub struct ConvKernel {
    name: String,
    eval: KernelFn,
    singular_order: f64,
    inner_scale: f64,
}

impl fmt::Debug for ConvKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvKernel")
            .field("name", &self.name)
            .field("singular_order", &self.singular_order)
            .field("inner_scale", &self.inner_scale)
            .finish()
    }
}

impl ConvKernel {
    /// `inner_scale` is the radius below which the kernel is smooth (infinite
    /// when the kernel is homogeneous); the near-field quadrature refines down
    /// to a fraction of it.
    pub fn new(
        name: &str,
        singular_order: f64,
        inner_scale: f64,
        eval: impl Fn(&HPoint) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(singular_order < 4.0) {
            return Err(Error::InvalidArgument(format!(
                "kernel `{name}` has order {singular_order}, not integrable in homogeneous dimension 4"
            )));
        }
        if !(inner_scale > 0.0) {
            return Err(Error::InvalidArgument(format!("kernel `{name}` needs a positive inner scale")));
        }
        Ok(ConvKernel { name: name.into(), eval: Arc::new(eval), singular_order, inner_scale })
    }

    pub fn phi() -> Self {
        Self::new("Phi", 2.0, f64::INFINITY, kernel_phi).expect("valid kernel")
    }

    /// `eta_eps^-2`: bounded by `eps^-4`, so of order 0 at fixed `eps > 0`.
    pub fn eta(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        Self::new(&format!("eta_{eps}^-2"), 0.0, eps, move |p| kernel_eta(eps, p))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn singular_order(&self) -> f64 {
        self.singular_order
    }

    pub fn inner_scale(&self) -> f64 {
        self.inner_scale
    }

    pub fn eval(&self, p: &HPoint) -> Result<Complex64> {
        (self.eval)(p)
    }
}
