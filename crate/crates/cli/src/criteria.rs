//! The fourteen acceptance criteria at their pinned parameters and seeds.

use std::time::Instant;

use asymptotic_mass::DEFAULT_SCHEDULE;
use heisenberg_core::quad::ShellRule;
use kohn_szego::DECAY_RADII;

use crate::check::{Check, Provenance};
use crate::suites::{self, tol};

pub const CRITERIA: [(u8, &str); 14] = [
    (1, "p-mass of the model end"),
    (2, "flux of rho^-2"),
    (3, "boundary identities I43, I44"),
    (4, "Paneitz boundary term"),
    (5, "bubble equation"),
    (6, "structure and commutation residuals"),
    (7, "conformal covariance of L_b and P"),
    (8, "torsion of rho^-2 theta0"),
    (9, "Szego decay of the cut source"),
    (10, "spurious solutions of Box_b g = -f"),
    (11, "sign of the mass variation"),
    (12, "sphere second variation"),
    (13, "quotient deficit"),
    (14, "Box_b zbar coefficient fit"),
];

/// Seed shared by every sampled criterion.
pub const SEED: u64 = 2024;

/// Sphere quadrature: rule per dyadic shell and number of shells on each
/// side of `rho = 1`.
pub const SPHERE_RULE: ShellRule = ShellRule { n_rho: 8, n_alpha: 16, n_phi: 8 };
pub const SPHERE_LEVELS: i32 = 6;

pub const DEFICIT_GRID: [(f64, f64); 3] = [(300.0, 1.0), (1000.0, 1.0), (3000.0, 1.0)];

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Criterion {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

fn runtime(name: String, seconds: f64, budget: f64) -> Check {
    Check::below(name, seconds, budget, Provenance::Exact)
}

/// Runs criterion `id` (1..=14); `None` for any other id.
pub fn run(id: u8) -> Option<Criterion> {
    let title = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let checks = match id {
        1 => {
            let mut out = Vec::new();
            for a in [1.0, -0.5, 3.0] {
                let (checks, secs) = timed(|| suites::mass_checks(a, &DEFAULT_SCHEDULE, (32, 32)));
                out.extend(checks);
                out.push(runtime(format!("p-mass runtime A={a} (s)"), secs, tol::MASS_SECONDS));
            }
            out
        }
        2 => {
            let (mut checks, secs) = timed(|| suites::flux_checks(1.0, (64, 64)));
            checks.push(runtime("flux runtime (s)".into(), secs, tol::FLUX_SECONDS));
            checks
        }
        3 => suites::identity_checks(1.0).into_iter().filter(|c| !c.name.starts_with("Paneitz")).collect(),
        4 => suites::identity_checks(1.0).into_iter().filter(|c| c.name.starts_with("Paneitz")).collect(),
        5 => suites::bubble_checks(&[0.5, 1.0, 5.0], SEED),
        6 => suites::structure_checks(SEED, ph_calculus::MIN_RESIDUAL_ORDER),
        7 => suites::covariance_checks(SEED),
        8 => suites::torsion_checks(SEED),
        9 => {
            let (mut checks, secs) = timed(|| suites::decay_checks(1.0, &DECAY_RADII));
            checks.push(runtime("Szego decay runtime (s)".into(), secs, tol::DECAY_SECONDS));
            checks
        }
        10 => suites::spurious_checks(1.0, SEED),
        11 => suites::mass_variation_checks(SEED, &ShellRule::default()),
        12 => suites::sphere_variation_checks(&SPHERE_RULE, SPHERE_LEVELS),
        13 => suites::deficit_checks(1.0, &DEFICIT_GRID).0,
        14 => suites::box_fit_checks(1.0),
        _ => unreachable!("ids come from CRITERIA"),
    };
    Some(Criterion { id, title, checks, seconds: start.elapsed().as_secs_f64() })
}

/// Every criterion in order.
pub fn run_all() -> Vec<Criterion> {
    CRITERIA.iter().filter_map(|&(id, _)| run(id)).collect()
}
