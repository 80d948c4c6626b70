use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, GoodFunction, LabeledGraph, VertexId};

use super::VerifyError;

/// Height-preserving labelled isomorphism from the input graph onto the
/// reconstructed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// `vertices[v]` is the image of input vertex `v`.
    pub vertices: Vec<VertexId>,
    /// `edges[e]` is the image of input edge `e`.
    pub edges: Vec<EdgeId>,
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edges between each unordered vertex pair, in index order.
fn pair_edges(g: &LabeledGraph) -> BTreeMap<(VertexId, VertexId), Vec<EdgeId>> {
    let mut out: BTreeMap<_, Vec<EdgeId>> = BTreeMap::new();
    for e in g.edge_ids() {
        let edge = g.edge(e);
        out.entry(key(edge.u, edge.v)).or_default().push(e);
    }
    out
}

fn labels_between(
    g: &LabeledGraph,
    pairs: &BTreeMap<(VertexId, VertexId), Vec<EdgeId>>,
    a: VertexId,
    b: VertexId,
) -> Vec<i64> {
    let mut labels: Vec<i64> =
        pairs.get(&key(a, b)).map(|es| es.iter().map(|&e| g.label(e)).collect()).unwrap_or_default();
    labels.sort_unstable();
    labels
}

/// Per-vertex invariant: value bits, degree, sorted incident labels.
fn signature(g: &LabeledGraph, height: f64, v: VertexId) -> (u64, usize, Vec<i64>) {
    let mut labels: Vec<i64> = g.incident(v).map(|e| g.label(e)).collect();
    labels.sort_unstable();
    (height.to_bits(), labels.len(), labels)
}

struct Search<'a> {
    input: &'a LabeledGraph,
    rebuilt: &'a LabeledGraph,
    input_pairs: BTreeMap<(VertexId, VertexId), Vec<EdgeId>>,
    rebuilt_pairs: BTreeMap<(VertexId, VertexId), Vec<EdgeId>>,
    candidates: Vec<Vec<VertexId>>,
    order: Vec<VertexId>,
    image: Vec<Option<VertexId>>,
    taken: BTreeSet<VertexId>,
}

impl Search<'_> {
    fn consistent(&self, v: VertexId, w: VertexId) -> bool {
        self.order.iter().filter_map(|&u| self.image[u.0].map(|x| (u, x))).all(|(u, x)| {
            labels_between(self.input, &self.input_pairs, v, u)
                == labels_between(self.rebuilt, &self.rebuilt_pairs, w, x)
        })
    }

    fn run(&mut self, depth: usize) -> bool {
        let Some(&v) = self.order.get(depth) else { return true };
        for w in self.candidates[v.0].clone() {
            if self.taken.contains(&w) || !self.consistent(v, w) {
                continue;
            }
            self.image[v.0] = Some(w);
            self.taken.insert(w);
            if self.run(depth + 1) {
                return true;
            }
            self.taken.remove(&w);
            self.image[v.0] = None;
        }
        false
    }
}

/// Searches for a witness. `rebuilt` must carry heights.
pub fn check_iso(rebuilt: &LabeledGraph, input: &LabeledGraph, f: &GoodFunction) -> Result<Witness, VerifyError> {
    let fail = |s: String| VerifyError::NotIsomorphic(s);
    let heights = rebuilt.heights().ok_or_else(|| fail("reconstructed graph has no heights".into()))?;
    if rebuilt.vertex_count() != input.vertex_count() {
        return Err(fail(format!("{} vertices, expected {}", rebuilt.vertex_count(), input.vertex_count())));
    }
    if rebuilt.edge_count() != input.edge_count() {
        return Err(fail(format!("{} edges, expected {}", rebuilt.edge_count(), input.edge_count())));
    }
    let rebuilt_sigs: Vec<_> = rebuilt.vertices().map(|w| signature(rebuilt, heights[w.0], w)).collect();
    let mut candidates = Vec::with_capacity(input.vertex_count());
    for v in input.vertices() {
        let h = f.value(v).ok_or_else(|| fail(format!("vertex {} has no value", input.name(v))))?;
        let sig = signature(input, h, v);
        let c: Vec<VertexId> = rebuilt.vertices().filter(|w| rebuilt_sigs[w.0] == sig).collect();
        if c.is_empty() {
            return Err(fail(format!("no reconstructed vertex matches {}", input.name(v))));
        }
        candidates.push(c);
    }
    let mut order: Vec<VertexId> = input.vertices().collect();
    order.sort_by_key(|v| (candidates[v.0].len(), std::cmp::Reverse(input.degree(*v)), *v));

    let mut search = Search {
        input,
        rebuilt,
        input_pairs: pair_edges(input),
        rebuilt_pairs: pair_edges(rebuilt),
        candidates,
        order,
        image: vec![None; input.vertex_count()],
        taken: BTreeSet::new(),
    };
    if !search.run(0) {
        return Err(fail("no height-preserving bijection respects the labelled edges".into()));
    }
    let vertices: Vec<VertexId> = search.image.iter().map(|x| x.expect("complete assignment")).collect();

    let mut edges = vec![EdgeId(0); input.edge_count()];
    for (&(a, b), es) in &search.input_pairs {
        let mut from: Vec<EdgeId> = es.clone();
        from.sort_by_key(|&e| (input.label(e), e));
        let mut to = search.rebuilt_pairs[&key(vertices[a.0], vertices[b.0])].clone();
        to.sort_by_key(|&e| (rebuilt.label(e), e));
        for (x, y) in from.into_iter().zip(to) {
            edges[x.0] = y;
        }
    }
    Ok(Witness { vertices, edges })
}

/// Checks a witness directly against both graphs.
pub fn validate_witness(
    rebuilt: &LabeledGraph,
    input: &LabeledGraph,
    f: &GoodFunction,
    w: &Witness,
) -> Result<(), String> {
    let heights = rebuilt.heights().ok_or("reconstructed graph has no heights")?;
    if w.vertices.len() != input.vertex_count() || rebuilt.vertex_count() != input.vertex_count() {
        return Err("vertex map has the wrong size".into());
    }
    if w.edges.len() != input.edge_count() || rebuilt.edge_count() != input.edge_count() {
        return Err("edge map has the wrong size".into());
    }
    let image: BTreeSet<VertexId> = w.vertices.iter().copied().collect();
    if image.len() != w.vertices.len() || image.iter().any(|x| x.0 >= rebuilt.vertex_count()) {
        return Err("vertex map is not a bijection".into());
    }
    let edge_image: BTreeSet<EdgeId> = w.edges.iter().copied().collect();
    if edge_image.len() != w.edges.len() || edge_image.iter().any(|x| x.0 >= rebuilt.edge_count()) {
        return Err("edge map is not a bijection".into());
    }
    for v in input.vertices() {
        if f.value(v) != Some(heights[w.vertices[v.0].0]) {
            return Err(format!("height of {} is not preserved", input.name(v)));
        }
    }
    for e in input.edge_ids() {
        let (src, dst) = (input.edge(e), rebuilt.edge(w.edges[e.0]));
        let mapped = key(w.vertices[src.u.0], w.vertices[src.v.0]);
        if mapped != key(dst.u, dst.v) {
            return Err(format!("endpoints of {e} are not preserved"));
        }
        if src.label != dst.label {
            return Err(format!("label of {e} is not preserved"));
        }
    }
    Ok(())
}
