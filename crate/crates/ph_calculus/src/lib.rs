//! Pseudohermitian calculus on charts of `H1`.
//!
//! From an admissible coframe `(theta, theta1)` with `d theta = i theta1 ^ theta1bar`
//! this crate derives the dual frame `(T, Z1)`, the Tanaka-Webster connection
//! form, the torsion `A_11` and the curvature `R`, and builds covariant
//! derivatives along index words, `Delta_b`, `Box_b`, the conformal
//! sublaplacian, the Paneitz operator and the Cartan tensor. The Levi form is
//! normalised to `h_11bar = 1` throughout.

pub mod coframe;
pub mod ops;
pub mod residuals;
pub mod structure;

pub use coframe::{Coframe, CoframeJets, OneForm};
pub use ops::{Frame, PHStructure};
pub use residuals::{residual_report, residual_report_at, ResidualReport, MIN_RESIDUAL_ORDER};
pub use structure::{dual_frame_jets, parse_word, Idx, Local, Vector};
