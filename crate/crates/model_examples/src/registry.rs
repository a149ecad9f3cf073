//! Example structures by name, with the gauge range on which they are sampled.

use asymptotic_mass::{af_structure, AFModel};
use heisenberg_core::sample::sample_points;
use heisenberg_core::{Complex64, Error, HPoint, Result};
use ph_calculus::PHStructure;

use crate::normal::{normal_coords_model, NormalBundle};
use crate::s2s1::s2s1_structure;
use crate::sphere::sphere_structure;

pub const EXAMPLE_NAMES: [&str; 5] = ["flat", "af", "s2s1", "sphere", "normal4"];

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub structure: PHStructure,
    /// Gauge range `[rho_min, rho_max]` for residual sampling.
    pub rho_range: (f64, f64),
}

impl Example {
    pub fn sample(&self, seed: u64, n: usize) -> Vec<HPoint> {
        sample_points(seed, n, self.rho_range.0, self.rho_range.1, 0.0)
    }
}

/// `af` uses `A = 1` and `normal4` the bundle of a unit Cartan tensor.
pub fn example(name: &str) -> Result<Example> {
    let (name, structure, rho_range) = match name {
        "flat" => ("flat", PHStructure::flat(), (0.1, 10.0)),
        "af" => ("af", af_structure(&AFModel::new(1.0)), (2.0, 50.0)),
        "s2s1" => ("s2s1", s2s1_structure(), (0.5, 50.0)),
        "sphere" => ("sphere", sphere_structure(), (0.1, 10.0)),
        "normal4" => {
            let model = normal_coords_model(&NormalBundle::from_cartan(Complex64::new(1.0, 0.0)))?;
            ("normal4", model.structure, (0.05, 0.5))
        }
        other => {
            return Err(Error::InvalidArgument(format!("unknown example `{other}` (known: {})", EXAMPLE_NAMES.join(", "))))
        }
    };
    Ok(Example { name, structure, rho_range })
}
