//! Reports and their text and structured renderings.

use serde::Serialize;

use super::spec::SCHEMA_VERSION;
use crate::zmod::FgAbelianGroup;

/// One computed value. `group` is present when the value is an abelian group.
#[derive(Clone, Debug, Serialize)]
pub struct Line {
    pub label: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<FgAbelianGroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// Resolved settings echoed back, in a fixed order.
    #[serde(serialize_with = "ordered_map")]
    pub settings: Vec<(String, String)>,
    pub results: Vec<Line>,
    pub checks: Vec<Check>,
    /// Sub-reports of a multi-fixture run, in fixture order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<(String, Report)>,
}

fn ordered_map<S: serde::Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            settings: Vec::new(),
            results: Vec::new(),
            checks: Vec::new(),
            cases: Vec::new(),
        }
    }

    pub fn setting(&mut self, key: &str, value: impl ToString) {
        self.settings.push((key.to_string(), value.to_string()));
    }

    pub fn group(&mut self, label: impl Into<String>, g: &FgAbelianGroup) {
        self.results.push(Line {
            label: label.into(),
            value: g.to_string(),
            group: Some(g.clone()),
        });
    }

    pub fn value(&mut self, label: impl Into<String>, value: impl ToString) {
        self.results.push(Line {
            label: label.into(),
            value: value.to_string(),
            group: None,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// All checks, including those of sub-reports, passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.cases.iter().all(|(_, r)| r.passed())
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
            + self.cases.iter().map(|(_, r)| r.failures()).sum::<usize>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            render_text(report, "", &mut out);
            out
        }
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn render_text(r: &Report, indent: &str, out: &mut String) {
    let settings: Vec<String> = r.settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
    if settings.is_empty() {
        out.push_str(&format!("{indent}{}\n", r.command));
    } else {
        out.push_str(&format!("{indent}{} [{}]\n", r.command, settings.join(" ")));
    }
    for line in &r.results {
        out.push_str(&format!("{indent}  {} = {}\n", line.label, line.value));
    }
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        if c.detail.is_empty() {
            out.push_str(&format!("{indent}  [{mark}] {}\n", c.name));
        } else {
            out.push_str(&format!("{indent}  [{mark}] {}: {}\n", c.name, c.detail));
        }
    }
    for (name, sub) in &r.cases {
        out.push_str(&format!("{indent}case {name}\n"));
        render_text(sub, &format!("{indent}  "), out);
    }
    if indent.is_empty() && r.failures() > 0 {
        out.push_str(&format!("{} check(s) failed\n", r.failures()));
    }
}
