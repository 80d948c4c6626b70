//! JSON documents, canonical serialization and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{validate_good_function, validate_graph, Edge, GoodFunction, LabeledGraph, VertexId};
use crate::planner::ConstructionPlan;
use crate::surface::SurfaceClass;

pub const GRAPH_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub label: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("heights must be given for all vertices or none (missing: {})", missing.join(", "))]
    PartialHeights { missing: Vec<String> },
    #[error("invalid graph: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Schema { path: path.into(), message: message.into() }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            ParseError::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner.to_string()),
            }
        } else {
            schema(path, strip_position(&inner.to_string()))
        }
    })?;
    de.end().map_err(|inner| ParseError::Syntax {
        line: inner.line(),
        column: inner.column(),
        message: strip_position(&inner.to_string()),
    })?;
    Ok(value)
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// A parsed graph with its function, if the document carried heights.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGraph {
    pub graph: LabeledGraph,
    pub function: Option<GoodFunction>,
}

impl ParsedGraph {
    /// The given function, or the synthesized one.
    pub fn function_or_default(&self) -> GoodFunction {
        match &self.function {
            Some(f) => f.clone(),
            None => self.graph.good_function().expect("validated graph"),
        }
    }
}

/// Converts a document into a graph, checking ids and heights.
pub fn document_to_graph(doc: &GraphDocument) -> Result<ParsedGraph, ParseError> {
    if doc.version != GRAPH_VERSION {
        return Err(schema("version", format!("expected {GRAPH_VERSION}, found {}", doc.version)));
    }
    let mut index: BTreeMap<&str, VertexId> = BTreeMap::new();
    for (i, entry) in doc.vertices.iter().enumerate() {
        if index.insert(entry.id.as_str(), VertexId(i)).is_some() {
            return Err(schema(format!("vertices[{i}].id"), format!("duplicate id {:?}", entry.id)));
        }
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, entry) in doc.edges.iter().enumerate() {
        let find = |field: &str, id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| schema(format!("edges[{i}].{field}"), format!("unknown vertex id {id:?}")))
        };
        edges.push(Edge { u: find("u", &entry.u)?, v: find("v", &entry.v)?, label: entry.label });
    }
    let names = doc.vertices.iter().map(|v| v.id.clone()).collect();
    let graph = LabeledGraph::new(names, edges).map_err(|e| ParseError::Invalid(vec![e.to_string()]))?;

    let given = doc.vertices.iter().filter(|v| v.height.is_some()).count();
    let heights = if given == 0 {
        None
    } else if given == doc.vertices.len() {
        Some(doc.vertices.iter().map(|v| v.height.expect("all heights present")).collect::<Vec<f64>>())
    } else {
        let missing = doc.vertices.iter().filter(|v| v.height.is_none()).map(|v| v.id.clone()).collect();
        return Err(ParseError::PartialHeights { missing });
    };
    let function = heights.as_deref().map(GoodFunction::from_values);
    Ok(ParsedGraph { graph: graph.with_heights(heights), function })
}

/// Strict parse of a graph document. Structure is not validated; see
/// [`load_graph`].
pub fn parse_graph(text: &str) -> Result<ParsedGraph, ParseError> {
    document_to_graph(&from_json::<GraphDocument>(text)?)
}

/// [`parse_graph`] followed by graph and function validation.
pub fn load_graph(text: &str) -> Result<ParsedGraph, ParseError> {
    let parsed = parse_graph(text)?;
    validate_graph(&parsed.graph).map_err(|vs| ParseError::Invalid(vs.iter().map(|v| v.to_string()).collect()))?;
    let f = parsed.function_or_default();
    validate_good_function(&parsed.graph, &f)
        .map_err(|vs| ParseError::Invalid(vs.iter().map(|v| v.to_string()).collect()))?;
    Ok(parsed)
}

pub fn graph_to_document(g: &LabeledGraph) -> GraphDocument {
    let heights = g.heights();
    GraphDocument {
        version: GRAPH_VERSION,
        vertices: g
            .vertices()
            .map(|v| VertexEntry { id: g.name(v).to_string(), height: heights.map(|h| h[v.0]) })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeEntry { u: g.name(e.u).to_string(), v: g.name(e.v).to_string(), label: e.label })
            .collect(),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("plain data serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn serialize_graph(g: &LabeledGraph) -> String {
    to_canonical_json(&graph_to_document(g))
}

pub fn serialize_plan(plan: &ConstructionPlan) -> String {
    to_canonical_json(plan)
}

pub fn parse_plan(text: &str) -> Result<ConstructionPlan, ParseError> {
    from_json(text)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// DOT text with vertices sorted by id and edges in input order.
pub fn export_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("graph reeb {\n");
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|a, b| g.name(*a).cmp(g.name(*b)));
    for v in order {
        match g.heights() {
            Some(h) => writeln!(out, "  {} [height={}];", quote(g.name(v)), h[v.0]),
            None => writeln!(out, "  {};", quote(g.name(v))),
        }
        .expect("write to string");
    }
    for e in g.edges() {
        let caption = SurfaceClass::from_label(e.label).caption();
        writeln!(
            out,
            "  {} -- {} [label={}, caption={}];",
            quote(g.name(e.u)),
            quote(g.name(e.v)),
            e.label,
            quote(&caption)
        )
        .expect("write to string");
    }
    out.push_str("}\n");
    out
}
