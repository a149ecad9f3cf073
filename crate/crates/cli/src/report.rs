//! Run reports and their JSON and CSV forms.
//!
//! JSON objects are written with keys in byte order and every float with 17
//! significant digits, so equal reports give equal bytes. Non-finite floats
//! become the strings `"inf"`, `"-inf"` and `"nan"`. Only the `timing`
//! member differs between identical runs.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Map, Value};

use crate::check::Check;

pub const SCHEMA: u64 = 1;

/// A plot-ready table carried alongside the checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Summary of one acceptance criterion inside a `suite` report.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionSummary {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    /// Indices into [`Report::checks`].
    pub checks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub criteria: Vec<CriterionSummary>,
    pub table: Option<Table>,
    /// `(stage, seconds)` in execution order.
    pub stages: Vec<(String, f64)>,
    pub total_seconds: f64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            criteria: Vec::new(),
            table: None,
            stages: Vec::new(),
            total_seconds: 0.0,
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        m.insert("parameters".into(), Value::Object(self.parameters.clone().into_iter().collect()));
        m.insert("pass".into(), json!(self.pass()));
        m.insert("checks".into(), Value::Array(self.checks.iter().map(check_value).collect()));
        if !self.criteria.is_empty() {
            let cs = self
                .criteria
                .iter()
                .map(|c| json!({"id": c.id, "title": c.title, "pass": c.pass, "checks": c.checks}))
                .collect();
            m.insert("criteria".into(), Value::Array(cs));
        }
        if let Some(t) = &self.table {
            let rows = t.rows.iter().map(|r| Value::Array(r.iter().map(|&x| num(x)).collect())).collect();
            m.insert("table".into(), json!({"header": t.header, "rows": Value::Array(rows)}));
        }
        let stages = self.stages.iter().map(|(name, s)| json!({"stage": name, "seconds": num(*s)})).collect();
        m.insert("timing".into(), json!({"total_seconds": num(self.total_seconds), "stages": Value::Array(stages)}));
        Value::Object(m)
    }

    /// Canonical JSON, one line, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        write_canonical(&self.to_value(), &mut s);
        s.push('\n');
        s
    }

    /// The table when there is one, otherwise one row per check.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(t) = &self.table {
            w.write_record(&t.header)?;
            for r in &t.rows {
                w.write_record(r.iter().map(|&x| fmt_f64(x)))?;
            }
        } else {
            w.write_record(["name", "value", "comparison", "reference", "tolerance", "provenance", "pass", "error"])?;
            for c in &self.checks {
                let reference: Vec<String> = c.comparison.reference().into_iter().map(fmt_f64).collect();
                w.write_record([
                    c.name.clone(),
                    fmt_f64(c.value),
                    c.comparison.kind().into(),
                    reference.join(";"),
                    c.comparison.tolerance().map(fmt_f64).unwrap_or_default(),
                    c.provenance.as_str().into(),
                    c.pass.to_string(),
                    c.error.clone().unwrap_or_default(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_value(c: &Check) -> Value {
    let reference = match c.comparison.reference().as_slice() {
        [r] => num(*r),
        rs => Value::Array(rs.iter().map(|&x| num(x)).collect()),
    };
    json!({
        "name": c.name,
        "value": num(c.value),
        "comparison": c.comparison.kind(),
        "reference": reference,
        "tolerance": c.comparison.tolerance().map(num).unwrap_or(Value::Null),
        "provenance": c.provenance.as_str(),
        "pass": c.pass,
        "error": c.error,
    })
}

/// A float as a JSON value; non-finite values become strings.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(fmt_f64(x)),
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => out.push_str(&u.to_string()),
            (_, Some(i), _) => out.push_str(&i.to_string()),
            (_, _, Some(f)) => out.push_str(&fmt_f64(f)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                write_canonical(&map[key], out);
            }
            out.push('}');
        }
    }
}
