//! Concrete pseudohermitian structures: `S2 x S1` as a quotient of the
//! Heisenberg group, the CR sphere on its Cayley chart with the Green
//! function, and a model in CR normal coordinates, plus a registry by name.

pub mod normal;
pub mod registry;
pub mod s2s1;
pub mod sphere;

pub use normal::{normal_coords_model, order_report, origin_data, NormalBundle, NormalModel, OrderReport, OriginData};
pub use registry::{example, Example, EXAMPLE_NAMES};
pub use s2s1::{
    dyadic, periodicity_residual, s2s1_paneitz_period, s2s1_paneitz_sampling, s2s1_structure, s2s1_torsion, s2s1_torsion_reference,
    PaneitzSampling,
};
pub use sphere::{
    cayley, sphere_green, sphere_green_field, sphere_nodes, sphere_paneitz_variations, sphere_psi, sphere_psi_derivatives, sphere_structure, SphereChart,
    SpherePoint,
};
