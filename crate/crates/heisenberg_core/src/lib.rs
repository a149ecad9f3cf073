//! Heisenberg group `H1`: points and group law, dilations, the gauge, CR
//! inversion, truncated Taylor jets, scalar fields and the standard frame,
//! plus quadrature rules shared by the other crates.

pub mod error;
pub mod field;
pub mod flat;
pub mod jet;
pub mod point;
pub mod quad;
pub mod sample;

pub use error::{Error, Result};
pub use field::{compose_jet, Coords, Domain, ScalarField};
pub use flat::{flat_kohn_box, flat_sublaplacian, flat_t, flat_z1, flat_z1bar};
pub use jet::{Axis, Jet};
pub use num_complex::Complex64;
pub use point::{cr_invert, cr_uninvert, dilate, gauge_rho, group_inv, group_mul, HPoint};

/// Default jet order used when a caller does not ask for one.
pub const DEFAULT_JET_ORDER: usize = 4;
