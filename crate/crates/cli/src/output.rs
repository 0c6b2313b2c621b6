use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use preproj_core::selftest;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
}

enum Body {
    Fields(Map<String, Value>),
    Raw(Value),
    Selftest(selftest::Report),
}

pub struct Report {
    body: Body,
    /// Replaces the generic Markdown rendering of the fields.
    markdown: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64, trials: usize) -> Self {
        let mut m = Map::new();
        m.insert("command".into(), command.into());
        m.insert("seed".into(), seed.into());
        m.insert("trials".into(), trials.into());
        Report { body: Body::Fields(m), markdown: None }
    }

    pub fn raw(v: Value) -> Self {
        Report { body: Body::Raw(v), markdown: None }
    }

    pub fn selftest(r: selftest::Report) -> Self {
        Report { body: Body::Selftest(r), markdown: None }
    }

    pub fn set(&mut self, key: &str, value: impl serde::Serialize) {
        if let Body::Fields(m) = &mut self.body {
            m.insert(key.into(), serde_json::to_value(value).expect("report value serializes"));
        }
    }

    pub fn set_markdown(&mut self, md: String) {
        self.markdown = Some(md);
    }

    pub fn render(&self, format: Format) -> String {
        match (&self.body, format) {
            (Body::Selftest(r), Format::Json) => r.to_json(),
            (Body::Selftest(r), Format::Md) => r.to_markdown(),
            (Body::Raw(v), Format::Json) => pretty(v),
            (Body::Raw(v), Format::Md) => format!("```json\n{}\n```\n", pretty(v)),
            (Body::Fields(m), Format::Json) => pretty(&Value::Object(m.clone())),
            (Body::Fields(m), Format::Md) => self.markdown.clone().unwrap_or_else(|| fields_markdown(m)),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn fields_markdown(m: &Map<String, Value>) -> String {
    let command = m.get("command").and_then(Value::as_str).unwrap_or("report");
    let mut s = format!("# {command}\n\n");
    let mut nested = Vec::new();
    for (k, v) in m {
        if k == "command" {
            continue;
        }
        match v {
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let items: Vec<String> = a.iter().map(scalar).collect();
                let _ = writeln!(s, "- **{k}**: [{}]", items.join(", "));
            }
            Value::Array(a) if a.iter().all(Value::is_object) => {
                let _ = writeln!(s, "- **{k}**:");
                for x in a {
                    let _ = writeln!(s, "  - {}", inline(x));
                }
            }
            Value::Object(o) if o.contains_key("module") => {
                let _ = writeln!(s, "- **{k}**: {}", inline(v));
            }
            Value::Array(_) | Value::Object(_) => nested.push((k, v)),
            _ => {
                let _ = writeln!(s, "- **{k}**: {}", scalar(v));
            }
        }
    }
    for (k, v) in nested {
        let _ = write!(s, "\n## {k}\n\n```json\n{}\n```\n", pretty(v));
    }
    s
}

/// Scalar and flat-array fields of an object on one line; nested values are left out.
fn inline(v: &Value) -> String {
    let Value::Object(m) = v else { return scalar(v) };
    let parts: Vec<String> = m
        .iter()
        .filter_map(|(k, x)| match x {
            Value::Object(_) => None,
            Value::Array(a) if a.iter().any(|y| y.is_object() || y.is_array()) => None,
            Value::Array(a) => Some(format!("{k} [{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", "))),
            _ => Some(format!("{k} {}", scalar(x))),
        })
        .collect();
    parts.join(", ")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Write the finished report to `out`, or to standard output.
pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
