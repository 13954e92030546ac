use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use recoupling::graphs::{parse_graph, AdmissibleGraph};
use recoupling::Error;

#[derive(Debug)]
pub enum Failure {
    Precondition(String),
    Invariant(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Precondition(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Precondition(m) => write!(f, "{m}"),
            Failure::Invariant(m) => write!(f, "internal invariant breached: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

pub fn precondition(msg: impl Into<String>) -> Failure {
    Failure::Precondition(msg.into())
}

/// A built-in alias, a file, or inline graph text (in that order).
pub fn load_graph(src: &str) -> Result<AdmissibleGraph, Failure> {
    if let Some(g) = AdmissibleGraph::builtin(src) {
        return Ok(g);
    }
    let path = Path::new(src);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| precondition(format!("{src}: {e}")))?;
        return Ok(parse_graph(&text)?);
    }
    if !src.contains('=') && !src.contains(':') {
        return Err(precondition(format!("unknown graph '{src}': not a built-in alias, a file, or graph text")));
    }
    Ok(parse_graph(src)?)
}

pub fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| precondition(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
