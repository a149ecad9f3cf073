//! Transformation laws of a pseudohermitian structure under a conformal
//! change of contact form and under deformations of the CR structure, with
//! the resulting variations of `Delta_b`, of the Paneitz quadratic form and
//! of the mass.

pub mod conformal;
pub mod deform;
pub mod variations;

pub use conformal::{check_lb_covariance, check_paneitz_covariance, conformal_change, conformal_laws, ConformalLaws};
pub use deform::{
    deform_first_order, delta_b_variations, finite_deformation, DeformationField, FirstVariation, SublaplacianVariation,
};
pub use variations::{cr_deformation, cr_mass_integrand, mass_first_variation, mass_variation_from_rdot, paneitz_qform_variations, QformVariations};
