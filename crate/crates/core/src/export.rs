//! DOT and JSON serialization of finite digraphs. Output is byte-stable
//! for identical inputs: fixed field order, no timestamps.

use serde::{Deserialize, Serialize};

use crate::digraph::FiniteDigraph;
use crate::error::Result;

/// JSON shape of a digraph: field order is fixed as n, levels, arcs,
/// labels.
#[derive(Debug, Serialize, Deserialize)]
pub struct JsonGraph {
    pub n: usize,
    pub levels: Option<Vec<i64>>,
    pub arcs: Vec<(u32, u32)>,
    pub labels: Option<Vec<String>>,
}

impl JsonGraph {
    pub fn from_graph(g: &FiniteDigraph) -> Self {
        Self {
            n: g.vertex_count(),
            levels: g.levels().map(|l| l.to_vec()),
            arcs: g.arcs().to_vec(),
            labels: g.labels().map(|l| l.to_vec()),
        }
    }

    pub fn into_graph(self) -> Result<FiniteDigraph> {
        FiniteDigraph::build(self.n, self.arcs, self.levels, None, self.labels)
    }
}

pub fn to_json(g: &FiniteDigraph) -> String {
    serde_json::to_string(&JsonGraph::from_graph(g)).expect("graph serializes")
}

pub fn from_json(s: &str) -> Result<FiniteDigraph> {
    let parsed: JsonGraph = serde_json::from_str(s)?;
    parsed.into_graph()
}

/// Graphviz rendering: one node per vertex named `v<level>_<index>` (or
/// `v<index>` without levels), labelled from the label table, one directed
/// edge per arc.
pub fn to_dot(g: &FiniteDigraph) -> String {
    let mut out = String::from("digraph {\n");
    let name = |v: u32| match g.level_of(v) {
        Some(l) => format!("v{l}_{v}"),
        None => format!("v{v}"),
    };
    for v in 0..g.vertex_count() as u32 {
        match g.label_of(v) {
            Some(label) => {
                out.push_str(&format!(
                    "  {} [label=\"{}\"];\n",
                    name(v),
                    label.replace('\\', "\\\\").replace('"', "\\\"")
                ));
            }
            None => out.push_str(&format!("  {};\n", name(v))),
        }
    }
    for &(u, v) in g.arcs() {
        out.push_str(&format!("  {} -> {};\n", name(u), name(v)));
    }
    out.push_str("}\n");
    out
}
