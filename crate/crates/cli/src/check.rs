//! Single numerical checks: a computed value, what it is compared against,
//! and the verdict.

use heisenberg_core::Result;

/// Where a reference value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// A closed-form value stated in the source text.
    Published,
    /// True by construction and asserted directly.
    Exact,
    /// Computed here by an independent route (quadrature, Monte Carlo, a
    /// second formula).
    Derived,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Exact => "exact",
            Provenance::Derived => "derived",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Comparison {
    /// `|value - reference| <= tolerance`
    Absolute { reference: f64, tolerance: f64 },
    /// `|value - reference| <= tolerance |reference|`
    Relative { reference: f64, tolerance: f64 },
    /// `value < bound`
    Below { bound: f64 },
    /// `value <= bound`
    AtMost { bound: f64 },
    /// `lo <= value <= hi`
    Within { lo: f64, hi: f64 },
}

impl Comparison {
    pub fn holds(&self, value: f64) -> bool {
        match *self {
            Comparison::Absolute { reference, tolerance } => (value - reference).abs() <= tolerance,
            Comparison::Relative { reference, tolerance } => (value - reference).abs() <= tolerance * reference.abs(),
            Comparison::Below { bound } => value < bound,
            Comparison::AtMost { bound } => value <= bound,
            Comparison::Within { lo, hi } => lo <= value && value <= hi,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Comparison::Absolute { .. } => "absolute",
            Comparison::Relative { .. } => "relative",
            Comparison::Below { .. } => "below",
            Comparison::AtMost { .. } => "at_most",
            Comparison::Within { .. } => "within",
        }
    }

    /// The number the value is compared with; `Within` has two.
    pub fn reference(&self) -> Vec<f64> {
        match *self {
            Comparison::Absolute { reference, .. } | Comparison::Relative { reference, .. } => vec![reference],
            Comparison::Below { bound } | Comparison::AtMost { bound } => vec![bound],
            Comparison::Within { lo, hi } => vec![lo, hi],
        }
    }

    /// The tolerance for `Absolute` and `Relative`; bounds carry none.
    pub fn tolerance(&self) -> Option<f64> {
        match *self {
            Comparison::Absolute { tolerance, .. } | Comparison::Relative { tolerance, .. } => Some(tolerance),
            _ => None,
        }
    }

    /// Replaces the tolerance, or the bound of a one-sided residual check
    /// (`Below` with a positive bound). Sign checks and ranges are unchanged.
    pub fn with_tolerance(self, tol: f64) -> Self {
        match self {
            Comparison::Absolute { reference, .. } => Comparison::Absolute { reference, tolerance: tol },
            Comparison::Relative { reference, .. } => Comparison::Relative { reference, tolerance: tol },
            Comparison::Below { bound } if bound > 0.0 => Comparison::Below { bound: tol },
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub provenance: Provenance,
    pub pass: bool,
    /// Set when the value could not be computed.
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, comparison: Comparison, provenance: Provenance) -> Self {
        let pass = comparison.holds(value);
        Check { name: name.into(), value, comparison, provenance, pass, error: None }
    }

    /// Runs `compute`; an error becomes a failed check carrying its message.
    pub fn attempt(
        name: impl Into<String>,
        comparison: Comparison,
        provenance: Provenance,
        compute: impl FnOnce() -> Result<f64>,
    ) -> Self {
        match compute() {
            Ok(v) => Check::new(name, v, comparison, provenance),
            Err(e) => Check {
                name: name.into(),
                value: f64::NAN,
                comparison,
                provenance,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn absolute(name: impl Into<String>, value: f64, reference: f64, tolerance: f64, provenance: Provenance) -> Self {
        Check::new(name, value, Comparison::Absolute { reference, tolerance }, provenance)
    }

    pub fn relative(name: impl Into<String>, value: f64, reference: f64, tolerance: f64, provenance: Provenance) -> Self {
        Check::new(name, value, Comparison::Relative { reference, tolerance }, provenance)
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64, provenance: Provenance) -> Self {
        Check::new(name, value, Comparison::Below { bound }, provenance)
    }

    pub fn with_tolerance(self, tol: f64) -> Self {
        if self.error.is_some() {
            return self;
        }
        Check::new(self.name, self.value, self.comparison.with_tolerance(tol), self.provenance)
    }
}
