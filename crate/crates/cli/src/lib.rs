//! Command-line front end: runs the verification suites and the mass,
//! flux and quotient computations, and writes canonical JSON or CSV reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or the report
//! cannot be written, 2 on bad arguments.

pub mod check;
pub mod commands;
pub mod config;
pub mod criteria;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

pub use check::{Check, Comparison, Provenance};
pub use commands::execute;
pub use config::{ArgError, Command, Format, Params, RunConfig};
pub use criteria::{Criterion, CRITERIA};
pub use report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_BAD_ARGS: i32 = 2;

fn render(report: &Report, format: Format) -> std::io::Result<Vec<u8>> {
    match format {
        Format::Json => Ok(report.to_json().into_bytes()),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).map_err(std::io::Error::other)?;
            Ok(buf)
        }
    }
}

/// Parses `argv`, runs the command, writes the report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::from_args(argv) {
        Ok(c) => c,
        Err(ArgError::Info(text)) => {
            print!("{text}");
            return EXIT_PASS;
        }
        Err(ArgError::Bad(text)) => {
            eprintln!("error: {}", text.trim_end());
            return EXIT_BAD_ARGS;
        }
    };
    let report = execute(&cfg);
    let written = render(&report, cfg.format).and_then(|bytes| match &cfg.out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    });
    if let Err(e) = written {
        eprintln!("error: writing the report: {e}");
        return EXIT_FAIL;
    }
    for c in report.failures() {
        match &c.error {
            Some(e) => eprintln!("FAIL {}: {e}", c.name),
            None => eprintln!("FAIL {}: value {} ({} {:?})", c.name, c.value, c.comparison.kind(), c.comparison.reference()),
        }
    }
    if report.pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
