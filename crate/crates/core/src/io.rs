//! Reading and writing defining graphs.
//!
//! Two textual forms are accepted: a JSON object
//! `{"vertices": ["a", "b"], "edges": [["a", "b"]]}` and the adjacency
//! shorthand `a-b,b-c` (bare names add isolated vertices).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DefiningGraph;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<[String; 2]>,
}

/// Parses the JSON form. Syntax errors carry a line and column.
pub fn parse_graph_json(text: &str) -> Result<DefiningGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| {
        Error::InvalidInput(format!("graph JSON, line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let edges: Vec<(String, String)> = file.edges.into_iter().map(|[u, v]| (u, v)).collect();
    DefiningGraph::new(&file.vertices, &edges)
}

/// JSON when the text starts with `{`, adjacency shorthand otherwise.
pub fn parse_graph_text(text: &str) -> Result<DefiningGraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        DefiningGraph::parse_adjacency(text.trim())
    }
}

pub fn read_graph_file(path: &Path) -> Result<DefiningGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_graph_text(&text)
}

pub fn graph_to_json(graph: &DefiningGraph) -> String {
    let file = GraphFile {
        vertices: graph.names().to_vec(),
        edges: graph
            .edges()
            .map(|(u, v)| [graph.name(u).to_string(), graph.name(v).to_string()])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("graph serializes")
}

/// Shorthand that lists isolated vertices explicitly and keeps vertex order.
pub fn graph_to_shorthand(graph: &DefiningGraph) -> String {
    let mut tokens: Vec<String> = Vec::new();
    for v in graph.all().iter() {
        // an edge token introduces v right after its earlier endpoint
        let before: Vec<String> = graph
            .neighbors(v)
            .iter()
            .filter(|&u| u < v)
            .map(|u| format!("{}-{}", graph.name(u), graph.name(v)))
            .collect();
        if before.is_empty() {
            tokens.push(graph.name(v).to_string());
        }
        tokens.extend(before);
    }
    tokens.join(",")
}
