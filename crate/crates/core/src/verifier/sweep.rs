use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::{BlockKind, Direction, End};
use crate::graph::{Edge, EdgeId, LabeledGraph, VertexId};
use crate::planner::{ComponentRef, ConstructionPlan, Merge, VertexAssembly};
use crate::surface::SurfaceClass;

use super::audit::audit_block;
use super::{EndName, VerifyError};

/// Reeb graph of the glued function.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedReeb {
    /// Vertices carry the value of their assembly as height.
    pub graph: LabeledGraph,
    /// Plan edge behind each reconstructed edge.
    pub sources: Vec<EdgeId>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// What leaves an assembly through one port.
struct PortOut {
    edge: EdgeId,
    side: End,
    class: SurfaceClass,
    group: usize,
}

struct LocalResult {
    ports: Vec<PortOut>,
    groups: usize,
}

fn structural(vertex: &str, detail: impl Into<String>) -> VerifyError {
    VerifyError::Structural { vertex: vertex.to_string(), detail: detail.into() }
}

fn resolve(name: &str, asm: &VertexAssembly, c: ComponentRef) -> Result<SurfaceClass, VerifyError> {
    asm.blocks
        .get(c.block)
        .and_then(|b| b.interface(c.end).get(c.slot).copied())
        .ok_or_else(|| structural(name, format!("component {}/{}/{} does not exist", c.block, EndName(c.end), c.slot)))
}

fn local(name: &str, asm: &VertexAssembly) -> Result<LocalResult, VerifyError> {
    let n = asm.blocks.len();
    for (i, b) in asm.blocks.iter().enumerate() {
        audit_block(name, i, b)?;
    }
    let fold = asm.blocks.iter().position(|b| matches!(b.kind, BlockKind::ExtremumFold { .. }));

    // Components of non-attachment, non-fold blocks.
    let mut index: BTreeMap<ComponentRef, usize> = BTreeMap::new();
    for (i, b) in asm.blocks.iter().enumerate() {
        if b.kind.is_attachment() || Some(i) == fold {
            continue;
        }
        for end in [End::Lower, End::Upper] {
            for slot in 0..b.interface(end).len() {
                let next = index.len();
                index.insert(ComponentRef::new(i, end, slot), next);
            }
        }
    }
    let lookup = |c: ComponentRef| -> Result<usize, VerifyError> {
        index.get(&c).copied().ok_or_else(|| {
            structural(
                name,
                format!("component {}/{}/{} is not a boundary of a core block", c.block, EndName(c.end), c.slot),
            )
        })
    };

    let mut fused = UnionFind::new(index.len());
    let mut blocks = UnionFind::new(n);
    for m in &asm.merges {
        match *m {
            Merge::Disjoint { first, second } => {
                let ok = |i: usize| i < n && !asm.blocks[i].kind.is_attachment() && Some(i) != fold;
                if !ok(first) || !ok(second) || first == second {
                    return Err(structural(name, "disjoint merge on an invalid block pair"));
                }
                blocks.union(first, second);
            }
            Merge::ConnectedSum { first, second } => {
                if first.end != second.end || first.block == second.block {
                    return Err(structural(name, "connected sum must join two blocks on the same end"));
                }
                let (a, b) = (lookup(first)?, lookup(second)?);
                if fused.find(a) == fused.find(b) {
                    return Err(structural(name, "connected sum closes a cycle"));
                }
                fused.union(a, b);
                blocks.union(first.block, second.block);
            }
        }
    }

    let mut group_class: BTreeMap<usize, SurfaceClass> = BTreeMap::new();
    for (&c, &i) in &index {
        let root = fused.find(i);
        let class = resolve(name, asm, c)?;
        group_class.entry(root).and_modify(|x| *x = x.connected_sum(class)).or_insert(class);
    }

    let mut claimed: BTreeMap<usize, EdgeId> = BTreeMap::new();
    let mut used = BTreeSet::new();
    let mut seen_edges = BTreeSet::new();
    let mut outs = Vec::new();
    for port in &asm.ports {
        if !seen_edges.insert(port.edge) {
            return Err(structural(name, format!("edge {} has two ports", port.edge)));
        }
        let i = lookup(port.component)?;
        let root = fused.find(i);
        if let Some(other) = claimed.insert(root, port.edge) {
            return Err(structural(name, format!("edges {other} and {} claim one component", port.edge)));
        }
        if fold.is_none() && port.component.end != port.side {
            return Err(structural(name, format!("edge {} leaves from the wrong side", port.edge)));
        }
        let mut class = group_class[&root];
        for &a in &port.attachments {
            let block = asm
                .blocks
                .get(a)
                .filter(|b| b.kind.is_attachment())
                .ok_or_else(|| structural(name, format!("edge {}: block {a} is not an attachment", port.edge)))?;
            let direction = match block.kind {
                BlockKind::KleinAttach { direction } | BlockKind::TorusAttach { direction } => direction,
                _ => unreachable!(),
            };
            if direction != Direction::facing(port.side) {
                return Err(structural(name, format!("edge {}: attachment {a} faces the wrong way", port.edge)));
            }
            if !used.insert(a) {
                return Err(structural(name, format!("attachment {a} is used twice")));
            }
            let plain = block.interface(port.side.flip());
            let special = block.interface(port.side);
            if plain != [SurfaceClass::SPHERE] || special.len() != 1 {
                return Err(structural(name, format!("attachment {a} has an unexpected interface")));
            }
            class = class.connected_sum(special[0]);
            blocks.union(a, port.component.block);
        }
        outs.push((port.edge, port.side, class, port.component.block));
    }
    for (i, b) in asm.blocks.iter().enumerate() {
        if b.kind.is_attachment() && !used.contains(&i) {
            return Err(structural(name, format!("attachment {i} is not used by any edge")));
        }
    }
    for (&c, &i) in &index {
        if !claimed.contains_key(&fused.find(i)) {
            return Err(VerifyError::DanglingComponent {
                vertex: name.to_string(),
                block: c.block,
                end: EndName(c.end),
                slot: c.slot,
            });
        }
    }

    if let Some(fi) = fold {
        let fblock = &asm.blocks[fi];
        let BlockKind::ExtremumFold { extremum } = fblock.kind else { unreachable!() };
        let open = match extremum {
            crate::graph::Extremum::Min => End::Upper,
            crate::graph::Extremum::Max => End::Lower,
        };
        if !fblock.interface(open.flip()).is_empty() {
            return Err(structural(name, "fold wrapper has a boundary on its closed side"));
        }
        if outs.iter().any(|o| o.1 != open) {
            return Err(structural(name, "folded assembly has a port on the closed side"));
        }
        let mut produced: Vec<SurfaceClass> = outs.iter().map(|o| o.2).collect();
        produced.sort();
        let mut declared = fblock.interface(open).to_vec();
        declared.sort();
        if produced != declared {
            return Err(structural(name, "fold wrapper boundary differs from the wrapped level set"));
        }
        for i in 0..n {
            blocks.union(fi, i);
        }
    } else if asm.blocks.iter().all(|b| b.morse) {
        let chi = |side: End| -> i128 { outs.iter().filter(|o| o.1 == side).map(|o| o.2.euler_char()).sum() };
        let delta = chi(End::Upper) - chi(End::Lower);
        let points: u64 = asm.blocks.iter().map(|b| u64::from(b.singular_points)).sum::<u64>()
            + asm.merges.iter().map(|m| u64::from(m.singular_points())).sum::<u64>();
        let half = delta / 2;
        if delta % 2 != 0 || half.unsigned_abs() as u64 > points || (half - points as i128) % 2 != 0 {
            return Err(VerifyError::EulerStep { vertex: name.to_string(), delta, points });
        }
    }

    let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let r = blocks.find(i);
        let next = roots.len();
        roots.entry(r).or_insert(next);
    }
    let ports = outs
        .into_iter()
        .map(|(edge, side, class, block)| PortOut { edge, side, class, group: roots[&blocks.find(block)] })
        .collect();
    Ok(LocalResult { ports, groups: roots.len() })
}

/// Glues the assemblies bottom to top and reads off the Reeb graph.
pub fn sweep(plan: &ConstructionPlan) -> Result<ReconstructedReeb, VerifyError> {
    let mut order: Vec<(&String, &VertexAssembly)> = plan.vertices.iter().collect();
    order.sort_by(|a, b| a.1.height.total_cmp(&b.1.height).then(a.0.cmp(b.0)));

    for (name, asm) in &order {
        let [a, b] = asm.interval;
        if !(a < asm.height && asm.height < b) {
            return Err(structural(name, "interval does not contain the vertex value"));
        }
    }
    // Same-height intervals may overlap; all later heights must clear them.
    let mut reach = f64::NEG_INFINITY;
    let mut reach_name = String::new();
    let mut level = f64::NEG_INFINITY;
    let mut level_reach = f64::NEG_INFINITY;
    for (name, asm) in &order {
        if asm.height > level {
            reach = reach.max(level_reach);
            level = asm.height;
            level_reach = f64::NEG_INFINITY;
        }
        if asm.interval[0] <= reach {
            return Err(VerifyError::IntervalOverlap { first: reach_name.clone(), second: (*name).clone() });
        }
        if asm.interval[1] > level_reach {
            level_reach = asm.interval[1];
            reach_name = (*name).clone();
        }
    }

    let mut names: Vec<String> = Vec::new();
    let mut heights: Vec<f64> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut sources = Vec::new();
    let mut active: BTreeMap<EdgeId, (VertexId, f64, SurfaceClass, String)> = BTreeMap::new();

    for (name, asm) in &order {
        let result = local(name, asm)?;
        let base = names.len();
        for k in 0..result.groups {
            names.push(if result.groups == 1 { (*name).clone() } else { format!("{name}#{k}") });
            heights.push(asm.height);
        }
        for port in result.ports.iter().filter(|p| p.side == End::Lower) {
            let (origin, origin_height, class, _) = active
                .remove(&port.edge)
                .ok_or_else(|| VerifyError::DanglingEdge { vertex: (*name).clone(), edge: port.edge })?;
            if origin_height >= asm.height {
                return Err(structural(name, format!("edge {} does not ascend", port.edge)));
            }
            if class != port.class {
                return Err(VerifyError::InterfaceMismatch {
                    vertex: (*name).clone(),
                    end: EndName(End::Lower),
                    edge: port.edge,
                    expected: class,
                    found: port.class,
                });
            }
            edges.push(Edge { u: origin, v: VertexId(base + port.group), label: class.to_label() });
            sources.push(port.edge);
        }
        for port in result.ports.iter().filter(|p| p.side == End::Upper) {
            let entry = (VertexId(base + port.group), asm.height, port.class, (*name).clone());
            if active.insert(port.edge, entry).is_some() {
                return Err(structural(name, format!("edge {} leaves two vertices upward", port.edge)));
            }
        }
    }
    if let Some((edge, (_, _, _, origin))) = active.into_iter().next() {
        return Err(VerifyError::DanglingEdge { vertex: origin, edge });
    }

    let graph =
        LabeledGraph::new(names, edges).map_err(|e| structural("-", e.to_string()))?.with_heights(Some(heights));
    Ok(ReconstructedReeb { graph, sources })
}
