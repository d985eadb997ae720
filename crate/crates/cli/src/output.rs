//! Reports and their human and JSON renderings.

use serde_json::{json, Value};

use torsion_core::report::CheckReport;
use torsion_core::rotation::TauResult;
use torsion_core::CertifiedInterval;

use crate::document::{q_value, serialize, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    /// Names of failed checks.
    pub failures: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, result: Value) -> Self {
        Self {
            command: command.into(),
            passed: true,
            failures: Vec::new(),
            result,
        }
    }

    /// Records every failing check of `checks`, prefixed by the report name.
    pub fn absorb(&mut self, checks: &CheckReport) {
        for c in checks.failures() {
            self.failures.push(format!("{}.{}", checks.name, c.name));
        }
        self.passed = self.failures.is_empty();
    }

    pub fn fail(&mut self, name: impl Into<String>) {
        self.failures.push(name.into());
        self.passed = false;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Report(Report),
    /// Documents print as canonical JSON in either format so they can be piped.
    Document(Document),
}

impl Output {
    pub fn passed(&self) -> bool {
        match self {
            Output::Report(r) => r.passed,
            Output::Document(_) => true,
        }
    }
}

pub fn interval_value(i: &CertifiedInterval) -> Value {
    json!({
        "lo": q_value(i.lo()),
        "hi": q_value(i.hi()),
        "exact": i.is_exact(),
        "width": q_value(&i.width()),
    })
}

pub fn tau_value(t: &TauResult) -> Value {
    let mut v = interval_value(&t.interval);
    let m = v.as_object_mut().expect("object");
    m.insert("iterations_used".into(), json!(t.iterations_used));
    m.insert(
        "rational".into(),
        match &t.rational {
            Some(r) => json!({ "p": r.p.to_string(), "q": r.q, "value": q_value(&r.value) }),
            None => Value::Null,
        },
    );
    v
}

pub fn checks_value(r: &CheckReport) -> Value {
    json!({
        "name": r.name,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

fn report_value(r: &Report) -> Value {
    json!({
        "command": r.command,
        "passed": r.passed,
        "failures": r.failures,
        "result": r.result,
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn write_report(output: &Output, format: Format) -> String {
    match output {
        Output::Document(d) => serialize(d),
        Output::Report(r) => match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&report_value(r)).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Human => {
                let mut rows = Vec::new();
                flatten("", &r.result, &mut rows);
                let width = rows
                    .iter()
                    .map(|(k, _)| k.chars().count())
                    .max()
                    .unwrap_or(0);
                let mut s = format!(
                    "{}: {}\n",
                    r.command,
                    if r.passed { "PASS" } else { "FAIL" }
                );
                for f in &r.failures {
                    s.push_str(&format!("  failed: {f}\n"));
                }
                for (k, v) in rows {
                    s.push_str(&format!("  {k:<width$}  {v}\n"));
                }
                s
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use torsion_core::rational::q;

    #[test]
    fn exact_tau_json() {
        let t = torsion_core::rotation::tau(
            &torsion_core::PLLift::translation(q("1/3")),
            &q("1/64"),
            8,
        )
        .unwrap();
        let v = tau_value(&t);
        assert_eq!(v["lo"], "1/3");
        assert_eq!(v["hi"], "1/3");
        assert_eq!(v["exact"], true);
    }

    #[test]
    fn failure_is_named() {
        let mut checks = CheckReport::new("verify_certificate");
        checks.push("product_equals_target", false, "differs");
        let mut r = Report::new("verify", checks_value(&checks));
        r.absorb(&checks);
        let text = write_report(&Output::Report(r), Format::Json);
        assert!(text.contains("\"verify_certificate.product_equals_target\""));
        assert!(text.contains("\"passed\": false"));
    }

    #[test]
    fn human_rows_are_sorted() {
        let r = Report::new("x", json!({"b": "2", "a": {"c": [1, true]}}));
        let text = write_report(&Output::Report(r), Format::Human);
        let keys: Vec<&str> = text
            .lines()
            .skip(1)
            .map(|l| l.split_whitespace().next().unwrap())
            .collect();
        assert_eq!(keys, vec!["a.c[0]", "a.c[1]", "b"]);
    }
}
