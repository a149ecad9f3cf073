//! Scans of the numerator deficit of the glued test function over
//! `(lambda, rho0)` on the flat chart with `R = 0`.

use std::io::Write;

use heisenberg_core::{Error, Result};
use ph_calculus::PHStructure;

use crate::glue::QuotientConfig;
use crate::quotient::glued_quotient;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeficitRow {
    pub lambda: f64,
    pub rho0: f64,
    pub a_tilde: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
    /// `deficit lambda^2 / Atilde` (the raw deficit when `Atilde = 0`)
    pub deficit_scaled: f64,
    /// `deficit lambda^2 rho0^2 / Atilde`
    pub deficit_scaled_rho0: f64,
    pub deficit: f64,
    pub deficit_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeficitScan {
    pub rows: Vec<DeficitRow>,
}

pub const CSV_HEADER: [&str; 8] =
    ["lambda", "rho0", "Atilde", "numerator", "denominator", "quotient", "deficit_scaled", "deficit_scaled_rho0"];

impl DeficitScan {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let cells = [r.lambda, r.rho0, r.a_tilde, r.numerator, r.denominator, r.quotient, r.deficit_scaled, r.deficit_scaled_rho0];
            w.write_record(cells.iter().map(|v| format!("{v:.17e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Limit of `deficit_scaled` (`rho0_normalised = false`) or of
    /// `deficit_scaled_rho0` as `lambda -> inf`, fitted as `c0 + c1 / lambda^2`
    /// over the rows sharing the `rho0` of the last row.
    pub fn fitted_limit(&self, rho0_normalised: bool) -> Result<f64> {
        let last = self.rows.last().ok_or_else(|| Error::InvalidArgument("empty scan".into()))?;
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.rho0 == last.rho0)
            .map(|r| (r.lambda.powi(-2), if rho0_normalised { r.deficit_scaled_rho0 } else { r.deficit_scaled }))
            .collect();
        if pts.len() < 2 {
            return Ok(if rho0_normalised { last.deficit_scaled_rho0 } else { last.deficit_scaled });
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        let (mx, my) = (sx / n, sy / n);
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        if sxx == 0.0 {
            return Ok(my);
        }
        Ok(my - sxy / sxx * mx)
    }
}

/// Runs [`glued_quotient`] on the flat chart for every `(lambda, rho0)` in
/// `grid`; every cell must satisfy `lambda rho0 >= 10` and
/// `lambda^2 rho0^4 >= 100`. `template` supplies the quadrature settings.
pub fn deficit_scan_with(a_tilde: f64, grid: &[(f64, f64)], template: &QuotientConfig) -> Result<DeficitScan> {
    let st = PHStructure::flat();
    let cfgs: Vec<QuotientConfig> = grid
        .iter()
        .map(|&(lambda, rho0)| {
            let cfg = QuotientConfig { lambda, rho0, a_tilde, ..template.clone() };
            cfg.validate_scan().map(|_| cfg)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(cfgs.len());
    for cfg in &cfgs {
        let g = glued_quotient(&st, cfg)?;
        let l2 = cfg.lambda * cfg.lambda;
        let norm = if a_tilde == 0.0 { 1.0 } else { a_tilde };
        rows.push(DeficitRow {
            lambda: cfg.lambda,
            rho0: cfg.rho0,
            a_tilde,
            numerator: g.numerator.value,
            denominator: g.denominator.value,
            quotient: g.value,
            deficit_scaled: g.deficit.value * l2 / norm,
            deficit_scaled_rho0: g.deficit.value * l2 * cfg.rho0 * cfg.rho0 / norm,
            deficit: g.deficit.value,
            deficit_error: g.deficit.error,
        });
    }
    Ok(DeficitScan { rows })
}

pub fn deficit_scan(a_tilde: f64, grid: &[(f64, f64)]) -> Result<DeficitScan> {
    deficit_scan_with(a_tilde, grid, &QuotientConfig::new(1.0, 1.0, a_tilde))
}
