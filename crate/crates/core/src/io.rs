//! File formats.
//!
//! * Graph text: `#` comment lines, a header `n <count>`, then one `u v`
//!   edge per line (0-based).
//! * Graph JSON: `{"n": 4, "edges": [[0, 1], [1, 2]]}`.
//! * Step graphon JSON: `{"n": 2, "values": [[1.0, 0.5], [0.5, 1.0]]}`.
//! * Boundary JSON: `{"breakpoints": [[0.0, 0.5], [0.5, 1.0], [1.0, 1.0]]}`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::boundary::BoundarySpec;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::{PointGraphon, StepGraphon};

/// Parses either graph format; JSON is recognized by a leading `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(parse_err(format!(
                        "expected header `n <count>`, found `{line}`"
                    )));
                }
                let count = fields[1]
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad vertex count: {e}")))?;
                n = Some(count);
            }
            Some(_) => {
                if fields.len() != 2 {
                    return Err(parse_err(format!("expected `u v`, found `{line}`")));
                }
                let u = fields[0]
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad vertex id: {e}")))?;
                let v = fields[1]
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad vertex id: {e}")))?;
                edges.push((u, v));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `n <count>` header".into(),
    })?;
    Graph::from_edges(n, &edges)
}

/// Serializes a graph in the text edge-list format.
pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Writes JSON when the path ends in `.json`, the text format otherwise.
pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = if path.extension().is_some_and(|e| e == "json") {
        serde_json::to_string(g)?
    } else {
        format_graph(g)
    };
    fs::write(path, body)?;
    Ok(())
}

pub fn parse_step_graphon(text: &str) -> Result<StepGraphon> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_step_graphon(path: impl AsRef<Path>) -> Result<StepGraphon> {
    parse_step_graphon(&fs::read_to_string(path)?)
}

pub fn save_step_graphon(w: &StepGraphon, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string(w)?)?;
    Ok(())
}

pub fn parse_boundary(text: &str) -> Result<BoundarySpec> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_boundary(path: impl AsRef<Path>) -> Result<BoundarySpec> {
    parse_boundary(&fs::read_to_string(path)?)
}

pub fn save_boundary(b: &BoundarySpec, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string(b)?)?;
    Ok(())
}

/// A graphon source file: either a step graphon or a boundary spec.
#[derive(Clone, Debug)]
pub enum GraphonSource {
    Step(StepGraphon),
    Boundary(BoundarySpec),
}

impl GraphonSource {
    pub fn describe(&self) -> String {
        match self {
            GraphonSource::Step(w) => format!("step graphon with {} blocks", w.n()),
            GraphonSource::Boundary(b) => {
                format!(
                    "boundary graphon with {} breakpoints",
                    b.breakpoints().len()
                )
            }
        }
    }
}

impl PointGraphon for GraphonSource {
    fn value(&self, x: f64, y: f64) -> f64 {
        match self {
            GraphonSource::Step(w) => w.value(x, y),
            GraphonSource::Boundary(b) => b.value(x, y),
        }
    }
}

/// Distinguishes the two graphon formats by their top-level key.
pub fn parse_graphon_source(text: &str) -> Result<GraphonSource> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("breakpoints").is_some() {
        Ok(GraphonSource::Boundary(serde_json::from_value(value)?))
    } else {
        Ok(GraphonSource::Step(serde_json::from_value(value)?))
    }
}

pub fn load_graphon_source(path: impl AsRef<Path>) -> Result<GraphonSource> {
    parse_graphon_source(&fs::read_to_string(path)?)
}
