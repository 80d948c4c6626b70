//! Labeled multigraphs and good functions on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a vertex inside its [`LabeledGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

/// Index of an edge inside its [`LabeledGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub label: i64,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("edge {edge} references unknown vertex index {index}")]
    DanglingEndpoint { edge: EdgeId, index: usize },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("loop forbids good function (edge {0})")]
    LoopForbidsGoodFunction(EdgeId),
}

/// Finite multigraph with integer edge labels and optional vertex heights.
///
/// Construction only checks referential integrity. Topological requirements
/// (connected, at least one edge, no loops) are reported by
/// [`validate_graph`] as data.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    names: Vec<String>,
    edges: Vec<Edge>,
    heights: Option<Vec<f64>>,
}

impl LabeledGraph {
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            for end in [e.u, e.v] {
                if end.0 >= names.len() {
                    return Err(GraphError::DanglingEndpoint { edge: EdgeId(i), index: end.0 });
                }
            }
        }
        Ok(LabeledGraph { names, edges, heights: None })
    }

    /// Builds a graph from `(u, v, label)` triples, creating vertices in
    /// order of first appearance.
    pub fn from_triples<S: AsRef<str>>(triples: &[(S, S, i64)]) -> Self {
        let mut names: Vec<String> = Vec::new();
        let mut index = BTreeMap::new();
        let mut intern = |s: &str, names: &mut Vec<String>| -> VertexId {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                VertexId(names.len() - 1)
            })
        };
        let edges = triples
            .iter()
            .map(|(u, v, label)| {
                let u = intern(u.as_ref(), &mut names);
                let v = intern(v.as_ref(), &mut names);
                Edge { u, v, label: *label }
            })
            .collect();
        LabeledGraph { names, edges, heights: None }
    }

    pub fn with_heights(mut self, heights: Option<Vec<f64>>) -> Self {
        if let Some(h) = &heights {
            assert_eq!(h.len(), self.names.len(), "one height per vertex");
        }
        self.heights = heights;
        self
    }

    /// Attaches heights by vertex name. Panics on unknown names or
    /// incomplete assignments; intended for fixtures.
    pub fn with_named_heights(self, heights: &[(&str, f64)]) -> Self {
        let mut values = vec![f64::NAN; self.names.len()];
        for (name, h) in heights {
            let id = self.vertex(name).unwrap_or_else(|| panic!("unknown vertex {name}"));
            values[id.0] = *h;
        }
        assert!(values.iter().all(|h| !h.is_nan()), "every vertex needs a height");
        self.with_heights(Some(values))
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn label(&self, e: EdgeId) -> i64 {
        self.edges[e.0].label
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn heights(&self) -> Option<&[f64]> {
        self.heights.as_deref()
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.u == v || e.v == v).map(|(i, _)| EdgeId(i))
    }

    /// Number of edge ends at `v`; a loop would count twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().map(|e| usize::from(e.u == v) + usize::from(e.v == v)).sum()
    }

    /// Copy with one edge label replaced.
    pub fn with_label(&self, e: EdgeId, label: i64) -> Self {
        let mut out = self.clone();
        out.edges[e.0].label = label;
        out
    }

    /// The good function carried by the heights, or a synthesized one.
    pub fn good_function(&self) -> Result<GoodFunction, GraphError> {
        match &self.heights {
            Some(h) => Ok(GoodFunction::from_values(h)),
            None => synthesize_good_function(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphViolation {
    NoEdges,
    Loop { edge: EdgeId, vertex: String },
    NotConnected { unreachable: Vec<String> },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::NoEdges => write!(f, "graph has no edges"),
            GraphViolation::Loop { edge, vertex } => write!(f, "loop at {vertex} (edge {edge})"),
            GraphViolation::NotConnected { unreachable } => {
                write!(f, "not connected (unreachable: {})", unreachable.join(", "))
            }
        }
    }
}

/// Checks connectivity, the presence of an edge, and the absence of loops.
pub fn validate_graph(g: &LabeledGraph) -> Result<(), Vec<GraphViolation>> {
    let mut violations = Vec::new();
    if g.edges.is_empty() {
        violations.push(GraphViolation::NoEdges);
    }
    for (i, e) in g.edges.iter().enumerate() {
        if e.u == e.v {
            violations.push(GraphViolation::Loop { edge: EdgeId(i), vertex: g.name(e.u).to_string() });
        }
    }
    if g.vertex_count() > 0 {
        let mut reached = vec![false; g.vertex_count()];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(x) = stack.pop() {
            for e in &g.edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a.0 == x && !reached[b.0] {
                        reached[b.0] = true;
                        stack.push(b.0);
                    }
                }
            }
        }
        let unreachable: Vec<String> =
            reached.iter().enumerate().filter(|(_, r)| !**r).map(|(i, _)| g.names[i].clone()).collect();
        if !unreachable.is_empty() {
            violations.push(GraphViolation::NotConnected { unreachable });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Vertex values of a continuous function on the graph, extended affinely
/// over each edge.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GoodFunction {
    values: BTreeMap<VertexId, f64>,
}

impl GoodFunction {
    pub fn new(values: BTreeMap<VertexId, f64>) -> Self {
        GoodFunction { values }
    }

    pub fn from_values(values: &[f64]) -> Self {
        GoodFunction { values: values.iter().enumerate().map(|(i, h)| (VertexId(i), *h)).collect() }
    }

    pub fn value(&self, v: VertexId) -> Option<f64> {
        self.values.get(&v).copied()
    }

    /// Value at `v`; panics if unassigned. Callers validate first.
    pub fn at(&self, v: VertexId) -> f64 {
        self.values[&v]
    }

    pub fn values(&self) -> &BTreeMap<VertexId, f64> {
        &self.values
    }

    /// Endpoints of `e` ordered as (lower, upper), or `None` if the edge is
    /// flat or touches an unassigned vertex.
    pub fn orient(&self, edge: &Edge) -> Option<(VertexId, VertexId)> {
        let (a, b) = (self.value(edge.u)?, self.value(edge.v)?);
        if a < b {
            Some((edge.u, edge.v))
        } else if b < a {
            Some((edge.v, edge.u))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionViolation {
    Unassigned { vertex: String },
    NonFinite { vertex: String, value: f64 },
    NotInjective { edge: EdgeId, value: f64 },
}

impl fmt::Display for FunctionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionViolation::Unassigned { vertex } => write!(f, "unassigned vertex {vertex}"),
            FunctionViolation::NonFinite { vertex, value } => {
                write!(f, "non-finite value {value} at {vertex}")
            }
            FunctionViolation::NotInjective { edge, value } => {
                write!(f, "edge {edge} has both endpoints at {value}")
            }
        }
    }
}

/// Every vertex has a finite value and no edge has equal endpoint values.
pub fn validate_good_function(g: &LabeledGraph, f: &GoodFunction) -> Result<(), Vec<FunctionViolation>> {
    let mut violations = Vec::new();
    for v in g.vertices() {
        match f.value(v) {
            None => violations.push(FunctionViolation::Unassigned { vertex: g.name(v).to_string() }),
            Some(x) if !x.is_finite() => {
                violations.push(FunctionViolation::NonFinite { vertex: g.name(v).to_string(), value: x })
            }
            Some(_) => {}
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if let (Some(a), Some(b)) = (f.value(e.u), f.value(e.v)) {
            if a == b {
                violations.push(FunctionViolation::NotInjective { edge: EdgeId(i), value: a });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Assigns `0, 1, 2, ...` to the vertices in lexicographic order of their ids.
pub fn synthesize_good_function(g: &LabeledGraph) -> Result<GoodFunction, GraphError> {
    if let Some(i) = g.edges.iter().position(|e| e.u == e.v) {
        return Err(GraphError::LoopForbidsGoodFunction(EdgeId(i)));
    }
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|a, b| g.name(*a).cmp(g.name(*b)));
    Ok(GoodFunction { values: order.into_iter().enumerate().map(|(rank, v)| (v, rank as f64)).collect() })
}

/// Local extremum type of a good function at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Min,
    Max,
}

/// Incident edges of a vertex split by direction and label sign.
///
/// `up` holds the edges ascending from the vertex (the function attains its
/// minimum over the edge there), `low` the descending ones. The `a_*` sets
/// keep the odd negative labels, the `b_*` sets all negative labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EdgeStars {
    pub up: Vec<EdgeId>,
    pub low: Vec<EdgeId>,
    pub a_up: Vec<EdgeId>,
    pub a_low: Vec<EdgeId>,
    pub b_up: Vec<EdgeId>,
    pub b_low: Vec<EdgeId>,
}

impl EdgeStars {
    /// `#A_up - #A_low`.
    pub fn difference(&self) -> i64 {
        self.a_up.len() as i64 - self.a_low.len() as i64
    }

    pub fn extremum(&self) -> Option<Extremum> {
        match (self.up.is_empty(), self.low.is_empty()) {
            (false, true) => Some(Extremum::Min),
            (true, false) => Some(Extremum::Max),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.up.len() + self.low.len()
    }
}

pub fn is_odd_negative(label: i64) -> bool {
    label < 0 && label % 2 != 0
}

pub fn edge_stars(g: &LabeledGraph, f: &GoodFunction, v: VertexId) -> Result<EdgeStars, GraphError> {
    if v.0 >= g.vertex_count() {
        return Err(GraphError::UnknownVertex(format!("#{}", v.0)));
    }
    let mut stars = EdgeStars::default();
    for e in g.incident(v) {
        let edge = g.edge(e);
        let Some((lower, _)) = f.orient(edge) else { continue };
        let ascending = lower == v;
        let (all, odd, neg) = if ascending {
            (&mut stars.up, &mut stars.a_up, &mut stars.b_up)
        } else {
            (&mut stars.low, &mut stars.a_low, &mut stars.b_low)
        };
        all.push(e);
        if edge.label < 0 {
            neg.push(e);
            if is_odd_negative(edge.label) {
                odd.push(e);
            }
        }
    }
    Ok(stars)
}

/// [`edge_stars`] keyed by vertex name.
pub fn edge_stars_by_name(g: &LabeledGraph, f: &GoodFunction, name: &str) -> Result<EdgeStars, GraphError> {
    let v = g.vertex(name).ok_or_else(|| GraphError::UnknownVertex(name.to_string()))?;
    edge_stars(g, f, v)
}
