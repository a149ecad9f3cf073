//! Runs a parsed configuration and assembles its report.

use std::time::Instant;

use asymptotic_mass::DEFAULT_SCHEDULE;
use heisenberg_core::quad::ShellRule;
use kohn_szego::DECAY_RADII;
use serde_json::{json, Value};
use yamabe_quotient::CSV_HEADER;

use crate::check::Check;
use crate::config::{Command, RunConfig};
use crate::criteria::{self, SPHERE_LEVELS, SPHERE_RULE};
use crate::report::{num, CriterionSummary, Report, Table};
use crate::suites;

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Collects stages of checks with their timing.
struct Stages {
    report: Report,
    tol: Option<f64>,
}

impl Stages {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Vec<Check>) {
        let start = Instant::now();
        let checks = f();
        self.report.stages.push((name.into(), start.elapsed().as_secs_f64()));
        let tol = self.tol;
        self.report.checks.extend(checks.into_iter().map(|c| match tol {
            Some(t) => c.with_tolerance(t),
            None => c,
        }));
    }

    fn param(&mut self, key: &str, v: Value) {
        self.report.parameters.insert(key.into(), v);
    }
}

/// Runs `cfg`; computation errors become failed checks, never panics.
pub fn execute(cfg: &RunConfig) -> Report {
    let start = Instant::now();
    let p = &cfg.params;
    let mut s = Stages { report: Report::new(cfg.command.name()), tol: p.tol };
    if let Some(t) = p.tol {
        s.param("tol", num(t));
    }
    if let Some(seed) = p.seed {
        s.param("seed", json!(seed));
    }
    match cfg.command {
        Command::Mass => {
            let a = p.a.unwrap_or(1.0);
            let schedule = p.schedule.clone().unwrap_or(DEFAULT_SCHEDULE.to_vec());
            let grid = p.grid.as_deref().map(|g| (g[0], g[1])).unwrap_or((32, 32));
            s.param("A", num(a));
            s.param("schedule", nums(&schedule));
            s.param("grid", json!([grid.0, grid.1]));
            s.run("p-mass", || suites::mass_checks(a, &schedule, grid));
        }
        Command::Flux => {
            let rho0 = p.rho0.unwrap_or(1.0);
            let grid = p.grid.as_deref().map(|g| (g[0], g[1])).unwrap_or((64, 64));
            s.param("rho0", num(rho0));
            s.param("grid", json!([grid.0, grid.1]));
            s.run("flux", || suites::flux_checks(rho0, grid));
        }
        Command::Identities => {
            let (a, seed) = (p.a.unwrap_or(1.0), p.seed.unwrap_or(criteria::SEED));
            s.param("A", num(a));
            s.run("boundary identities", || suites::identity_checks(a));
            s.run("covariance", || suites::covariance_checks(seed));
            s.run("torsion", || suites::torsion_checks(seed));
        }
        Command::Kohn => {
            let (a, seed) = (p.a.unwrap_or(1.0), p.seed.unwrap_or(criteria::SEED));
            let radii = p.schedule.clone().unwrap_or(DECAY_RADII.to_vec());
            s.param("A", num(a));
            s.param("schedule", nums(&radii));
            s.run("Szego decay", || suites::decay_checks(a, &radii));
            s.run("spurious solutions", || suites::spurious_checks(a, seed));
            s.run("Box_b zbar fit", || suites::box_fit_checks(a));
        }
        Command::Bubble => {
            let lambdas = p.lambda.clone().unwrap_or(vec![0.5, 1.0, 5.0]);
            s.param("lambda", nums(&lambdas));
            s.run("bubble equation", || suites::bubble_checks(&lambdas, p.seed.unwrap_or(criteria::SEED)));
        }
        Command::Quotient => {
            let a_tilde = p.a_tilde.unwrap_or(1.0);
            let rho0 = p.rho0.unwrap_or(1.0);
            let lambdas = p.lambda.clone().unwrap_or(criteria::DEFICIT_GRID.iter().map(|g| g.0).collect());
            let grid: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, rho0)).collect();
            s.param("Atilde", num(a_tilde));
            s.param("rho0", num(rho0));
            s.param("lambda", nums(&lambdas));
            let mut scan = None;
            s.run("deficit scan", || {
                let (checks, sc) = suites::deficit_checks(a_tilde, &grid);
                scan = sc;
                checks
            });
            s.report.table = scan.map(|sc| Table {
                header: CSV_HEADER.iter().map(|h| h.to_string()).collect(),
                rows: sc
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.lambda,
                            r.rho0,
                            r.a_tilde,
                            r.numerator,
                            r.denominator,
                            r.quotient,
                            r.deficit_scaled,
                            r.deficit_scaled_rho0,
                        ]
                    })
                    .collect(),
            });
        }
        Command::Variation => {
            let seed = p.seed.unwrap_or(criteria::SEED);
            let rule = p
                .grid
                .as_deref()
                .map(|g| ShellRule { n_rho: g[0], n_alpha: g[1], n_phi: g[2] })
                .unwrap_or(SPHERE_RULE);
            s.param("grid", json!([rule.n_rho, rule.n_alpha, rule.n_phi]));
            s.run("mass variation", || suites::mass_variation_checks(seed, &ShellRule::default()));
            s.run("sphere second variation", || suites::sphere_variation_checks(&rule, SPHERE_LEVELS));
        }
        Command::Examples => {
            let order = p.jet_order.unwrap_or(ph_calculus::MIN_RESIDUAL_ORDER);
            s.param("jet-order", json!(order));
            s.param("examples", json!(model_examples::EXAMPLE_NAMES));
            s.run("residual suites", || suites::structure_checks(p.seed.unwrap_or(criteria::SEED), order));
        }
        Command::Suite => {
            for c in criteria::run_all() {
                let first = s.report.checks.len();
                s.report.stages.push((format!("criterion {}", c.id), c.seconds));
                s.report.criteria.push(CriterionSummary {
                    id: c.id,
                    title: c.title.into(),
                    pass: c.pass(),
                    checks: (first..first + c.checks.len()).collect(),
                });
                s.report.checks.extend(c.checks);
            }
        }
    }
    let mut report = s.report;
    report.total_seconds = start.elapsed().as_secs_f64();
    report
}

