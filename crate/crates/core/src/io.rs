//! Instance files, graph-description export and sidecar metadata.
//!
//! An instance file is a header line `n m` followed by `m` lines `u v`, one
//! arc `u→v` per line, 0-indexed. Blank lines and lines starting with `#`
//! are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::digraph::Digraph;
use crate::error::ParseError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
}

impl IoError {
    pub fn is_parse(&self) -> bool {
        matches!(self, IoError::Parse { .. })
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn parse_number(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| parse_error(line, format!("{what} `{token}` is not a non-negative integer")))
}

/// Parses an instance file. Duplicate arc lines are merged.
pub fn parse_instance(text: &str) -> Result<Digraph, ParseError> {
    let mut content = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = content.next().ok_or_else(|| parse_error(1, "missing header `n m`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return Err(parse_error(header_line, format!("expected header `n m`, found `{header}`")));
    };
    let n = parse_number(header_line, n, "vertex count")?;
    let m = parse_number(header_line, m, "arc count")?;

    let mut arcs = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, text) in content {
        last_line = line;
        if arcs.len() == m {
            return Err(parse_error(line, format!("expected {m} arc lines, found more")));
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(parse_error(line, format!("expected arc `u v`, found `{text}`")));
        };
        let u = parse_number(line, u, "vertex")?;
        let v = parse_number(line, v, "vertex")?;
        for x in [u, v] {
            if x >= n {
                return Err(parse_error(line, format!("index {x} ≥ n={n}")));
            }
        }
        if u == v {
            return Err(parse_error(line, format!("loop at vertex {u}")));
        }
        arcs.push((u, v));
    }
    if arcs.len() < m {
        return Err(parse_error(last_line + 1, format!("expected {m} arc lines, found {}", arcs.len())));
    }
    Ok(Digraph::new(n, arcs).expect("arcs checked above"))
}

/// Writes the header and the arcs in lexicographic order.
pub fn serialize_instance(d: &Digraph) -> String {
    let mut out = format!("{} {}\n", d.order(), d.arc_count());
    for (u, v) in d.arcs() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_instance(path: &Path) -> Result<Digraph, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })?;
    parse_instance(&text).map_err(|source| IoError::Parse { path: path.to_owned(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write { path: path.to_owned(), source })
}

pub fn write_instance(path: &Path, d: &Digraph) -> Result<(), IoError> {
    write_text(path, &serialize_instance(d))
}

/// Graph-description (DOT) export with one edge statement per arc.
pub fn to_dot(d: &Digraph, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", dot_id(name));
    for v in 0..d.order() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in d.arcs() {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn dot_id(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !name.starts_with(|c: char| c.is_ascii_digit()) {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// `out.dg` → `out.dg.meta.json`.
pub fn sidecar_path(instance: &Path) -> PathBuf {
    let mut name = instance.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}
