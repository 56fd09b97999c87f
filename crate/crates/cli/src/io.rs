//! File formats: plain edge lists and instance JSON.
//!
//! Edge list: one "u v" pair per line; '#' starts a comment; blank lines
//! ignored. Vertex count is max id + 1.
//!
//! Instance JSON: {"mode": "se"|"sn", "thresholds": [..], "edges": [[u,v],..],
//! "directed": bool}. Both formats round-trip bit-exactly after id
//! normalization (edges sorted, duplicates rejected).

use anticoord_core::{Graph, Mode, ThresholdSystem};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug)]
pub enum FormatError {
    Line { line: usize, message: String },
    Json(serde_json::Error),
    BadInstance(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Line { line, message } => write!(f, "line {}: {}", line, message),
            FormatError::Json(e) => write!(f, "json: {}", e),
            FormatError::BadInstance(msg) => write!(f, "bad instance: {}", msg),
        }
    }
}

impl std::error::Error for FormatError {}

pub fn parse_mode(s: &str) -> Result<Mode, FormatError> {
    match s {
        "se" => Ok(Mode::SelfEssential),
        "sn" => Ok(Mode::SelfNonEssential),
        other => Err(FormatError::BadInstance(format!(
            "mode must be \"se\" or \"sn\", got {:?}",
            other
        ))),
    }
}

pub fn read_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = 0usize;
    let mut saw_vertex = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize, FormatError> {
            let tok = tok.ok_or(FormatError::Line {
                line: line_no,
                message: "expected two vertex ids".into(),
            })?;
            tok.parse::<usize>().map_err(|_| FormatError::Line {
                line: line_no,
                message: format!("not a vertex id: {:?}", tok),
            })
        };
        let u = parse(parts.next())?;
        let v = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(FormatError::Line {
                line: line_no,
                message: "trailing tokens after edge".into(),
            });
        }
        if u == v {
            return Err(FormatError::Line {
                line: line_no,
                message: format!("self-loop at vertex {}", u),
            });
        }
        max_id = max_id.max(u).max(v);
        saw_vertex = true;
        edges.push((u.min(v), u.max(v)));
    }
    if !saw_vertex {
        return Err(FormatError::BadInstance("empty edge list".into()));
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::undirected(max_id + 1, edges).map_err(|e| FormatError::BadInstance(format!("{:?}", e)))
}

pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in graph.edges() {
        out.push_str(&format!("{} {}\n", u, v));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    mode: String,
    thresholds: Vec<usize>,
    edges: Vec<(usize, usize)>,
    directed: bool,
}

pub fn read_instance(json: &str) -> Result<ThresholdSystem, FormatError> {
    let file: InstanceFile = serde_json::from_str(json).map_err(FormatError::Json)?;
    let mode = parse_mode(&file.mode)?;
    let n = file.thresholds.len();
    let graph = if file.directed {
        Graph::directed(n, file.edges)
    } else {
        Graph::undirected(n, file.edges)
    }
    .map_err(|e| FormatError::BadInstance(format!("{:?}", e)))?;
    ThresholdSystem::new(graph, file.thresholds, mode)
        .map_err(|e| FormatError::BadInstance(format!("{:?}", e)))
}

pub fn write_instance(system: &ThresholdSystem) -> String {
    let file = InstanceFile {
        mode: system.mode().to_string(),
        thresholds: system.tau1_vec().to_vec(),
        edges: system.graph().edges().to_vec(),
        directed: system.graph().is_directed(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("instance serializes");
    out.push('\n');
    out
}
