//! The standard bubble of the Heisenberg group and its quotient, the glued
//! bubble/Green test function, and the numerator deficit that a positive
//! mass produces in the Tanaka-Webster quotient.

pub mod bubble;
pub mod deficit;
pub mod glue;
pub mod integrate;
pub mod quotient;

pub use bubble::{
    bubble, bubble_boundary_term, bubble_field, bubble_grad_sq, bubble_grad_sq_jet, bubble_pde_residual, bubble_quotient,
    bubble_z1, BubbleQuotient,
};
pub use deficit::{deficit_scan, deficit_scan_with, DeficitRow, DeficitScan, CSV_HEADER};
pub use glue::{continuity_gap, test_function, test_function_field, QuotientConfig, Region};
pub use integrate::Value;
pub use quotient::{glued_quotient, quotient, remainder_report, GluedQuotient, Quotient, RemainderReport};
