//! Report documents in two formats. JSON is the serde form of the report;
//! text is derived from the same JSON value so both carry the same fields.
//!
//! Text layout: scalar top-level fields become `key=value` lines. Each array
//! of objects becomes one line per element, prefixed with the field name, as
//! space-separated `key=value` pairs. Nested objects flatten to dotted keys,
//! scalar arrays (vertex sets) to comma-separated lists, `null` to `-`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected text or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

pub fn render<T: Serialize>(report: &T, format: Format) -> String {
    let value = serde_json::to_value(report).expect("reports serialize to JSON");
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&value).expect("JSON value prints");
            out.push('\n');
            out
        }
        Format::Text => render_text(&value),
    }
}

fn render_text(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            let mut scalars = Vec::new();
            let mut sections = Vec::new();
            for (key, v) in map {
                match v {
                    Value::Array(items) if items.iter().any(Value::is_object) => sections.push((key, items)),
                    _ => flatten(key, v, &mut scalars),
                }
            }
            for (k, v) in scalars {
                out.push_str(&format!("{k}={v}\n"));
            }
            for (key, items) in sections {
                for item in items {
                    out.push_str(&format!("{key}: {}\n", line(item)));
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&line(item));
                out.push('\n');
            }
        }
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn line(value: &Value) -> String {
    let mut pairs = Vec::new();
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(k, v, &mut pairs);
            }
        }
        other => pairs.push(("value".to_string(), scalar(other))),
    }
    pairs.into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined = items.iter().map(scalar).collect::<Vec<_>>().join(",");
            out.push((prefix.to_string(), quote(joined)));
        }
        Value::Array(items) if items.iter().all(Value::is_array) => {
            out.push((prefix.to_string(), value.to_string()));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::Null => "-".into(),
        Value::String(s) => quote(s.clone()),
        other => other.to_string(),
    }
}

fn quote(s: String) -> String {
    if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        Value::String(s).to_string()
    } else {
        s
    }
}
