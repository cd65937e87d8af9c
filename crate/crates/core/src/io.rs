//! Graph file format: a JSON object with `vertices` and `edges` lists.
//!
//! ```json
//! {
//!   "vertices": [{"id": "a", "mu": 1.0, "h": 2.0}, {"id": "b", "mu": 2.0}],
//!   "edges": [{"u": "a", "v": "b", "w": 1.0}]
//! }
//! ```
//!
//! Each undirected edge appears once; the loader symmetrises. The optional
//! per-vertex `h` is the potential: either every vertex carries it or none
//! does. Numbers round-trip bit-exactly (shortest representation on write,
//! exact parse on read), so save → load preserves a graph identically.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<VertexDto>,
    edges: Vec<EdgeDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexDto {
    id: String,
    mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDto {
    u: String,
    v: String,
    w: f64,
}

/// A parsed graph file: the graph plus its optional potential.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub h: Option<VertexFunction>,
}

fn field_err(location: String, source: Error) -> Error {
    Error::FileField {
        location,
        source: Box::new(source),
    }
}

/// Parses the JSON graph format from a string.
pub fn load_graph_str(text: &str) -> Result<LoadedGraph> {
    let file: GraphFile = serde_json::from_str(text)?;

    // Validate field by field so errors point at the offending entry.
    let mut seen_ids = std::collections::HashMap::new();
    for (i, v) in file.vertices.iter().enumerate() {
        let loc = format!("vertices[{i}] (id {:?})", v.id);
        if seen_ids.insert(v.id.clone(), ()).is_some() {
            return Err(field_err(loc, Error::DuplicateVertex { id: v.id.clone() }));
        }
        if !(v.mu > 0.0) || !v.mu.is_finite() {
            return Err(field_err(
                loc,
                Error::NonPositiveMeasure {
                    id: v.id.clone(),
                    value: v.mu,
                },
            ));
        }
    }
    if file.vertices.is_empty() {
        return Err(field_err("vertices".into(), Error::EmptyGraph));
    }

    let mut seen_edges = std::collections::HashMap::new();
    for (j, e) in file.edges.iter().enumerate() {
        let loc = format!("edges[{j}] ({:?}-{:?})", e.u, e.v);
        for end in [&e.u, &e.v] {
            if !seen_ids.contains_key(end) {
                return Err(field_err(loc, Error::UnknownEndpoint { id: end.clone() }));
            }
        }
        if e.u == e.v {
            return Err(field_err(loc, Error::SelfLoop { id: e.u.clone() }));
        }
        if !(e.w > 0.0) || !e.w.is_finite() {
            return Err(field_err(
                loc,
                Error::NonPositiveWeight {
                    a: e.u.clone(),
                    b: e.v.clone(),
                    value: e.w,
                },
            ));
        }
        let key = if e.u < e.v {
            (e.u.clone(), e.v.clone())
        } else {
            (e.v.clone(), e.u.clone())
        };
        if seen_edges.insert(key, ()).is_some() {
            return Err(field_err(
                loc,
                Error::DuplicateEdge {
                    a: e.u.clone(),
                    b: e.v.clone(),
                },
            ));
        }
    }

    let with_h = file.vertices.iter().filter(|v| v.h.is_some()).count();
    if with_h != 0 && with_h != file.vertices.len() {
        return Err(field_err(
            "vertices".into(),
            Error::InvalidProblem(
                "the potential h must be given on every vertex or on none".into(),
            ),
        ));
    }

    let h = if with_h > 0 {
        for (i, v) in file.vertices.iter().enumerate() {
            let hv = v.h.unwrap();
            if !(hv > 0.0) || !hv.is_finite() {
                return Err(field_err(
                    format!("vertices[{i}] (id {:?})", v.id),
                    Error::NonPositivePotential {
                        id: v.id.clone(),
                        min: hv,
                    },
                ));
            }
        }
        Some(VertexFunction::new(
            file.vertices.iter().map(|v| v.h.unwrap()).collect(),
        ))
    } else {
        None
    };

    let graph = WeightedGraph::from_parts(
        file.vertices.iter().map(|v| (v.id.clone(), v.mu)),
        file.edges.iter().map(|e| (e.u.clone(), e.v.clone(), e.w)),
    )?;
    Ok(LoadedGraph { graph, h })
}

/// Reads and parses a graph file from disk.
pub fn load_graph(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::FileIo {
        path: path.display().to_string(),
        source,
    })?;
    load_graph_str(&text)
}

/// Serialises a graph (and optional potential) to the JSON format.
pub fn graph_to_string(g: &WeightedGraph, h: Option<&VertexFunction>) -> String {
    let file = GraphFile {
        vertices: (0..g.len())
            .map(|i| VertexDto {
                id: g.id(i).to_string(),
                mu: g.measure(i),
                h: h.map(|h| h[i]),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeDto {
                u: g.id(e.a).to_string(),
                v: g.id(e.b).to_string(),
                w: e.w,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("graph serialisation cannot fail")
}

/// Writes the JSON format to disk.
pub fn save_graph(
    path: impl AsRef<Path>,
    g: &WeightedGraph,
    h: Option<&VertexFunction>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, graph_to_string(g, h)).map_err(|source| Error::FileIo {
        path: path.display().to_string(),
        source,
    })
}
