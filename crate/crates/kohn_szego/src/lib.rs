//! Convolution calculus on `H1` for the flat Kohn Laplacian: the kernels of
//! the partial inverse `K h = h * Phi` and of the Szegő projection `S`, the
//! source term `f` and the spurious solutions of `Box_b g = -f`.

pub mod convolution;
pub mod kernel;
pub mod source;
pub mod szego;

pub use convolution::{convolve, QuadConfig};
pub use heisenberg_core::quad::{Estimate, ShellRule};
pub use kernel::{kernel_eta, kernel_phi, ConvKernel};
pub use source::{
    beta_1bar_leading, beta_model, cut_source_field, cutoff_field, g_hat_field, g_tilde_field, gtilde_z1bar, source_f, source_field,
    spurious_g_hat, spurious_g_tilde,
};
pub use szego::{szego_apply, szego_approximants, szego_decay, DecayReport, DECAY_RADII, DEFAULT_EPS};
