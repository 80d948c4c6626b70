//! Construction plans: one block assembly per vertex, glued along the
//! edges.
//!
//! Every assembly lives over `[g(v) - eps, g(v) + eps]`. Its boundary level
//! sets are handed to the incident edges through [`Port`]s; each port may
//! carry Klein bottle or torus attachments that raise the genus of the
//! component from its base class to the class of the edge label.

mod assembly;
mod correction;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{BlockInstance, BlockKind, End};
use crate::graph::{EdgeId, GoodFunction, LabeledGraph};
use crate::realizability::{Coverage, RealizabilityReport};

pub use assembly::plan_vertex;
pub use correction::{choose_correction_set, CorrectionError};

/// Labels beyond this magnitude are refused; every unit of genus becomes a
/// separate attachment block.
pub const MAX_PLANNED_LABEL: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentRef {
    pub block: usize,
    pub end: End,
    pub slot: usize,
}

impl ComponentRef {
    pub fn new(block: usize, end: End, slot: usize) -> Self {
        ComponentRef { block, end, slot }
    }
}

/// Gluing of two sub-functions with the same singular value into one whose
/// singular level is connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Merge {
    /// Level sets of the result are disjoint unions of the inputs' level
    /// sets. `first` and `second` name one block of each sub-function.
    Disjoint { first: usize, second: usize },
    /// Like `Disjoint`, except one boundary component from each side is
    /// replaced by their connected sum.
    ConnectedSum { first: ComponentRef, second: ComponentRef },
}

impl Merge {
    /// Morse points of the gluing piece.
    pub fn singular_points(&self) -> u32 {
        match self {
            Merge::Disjoint { .. } => 2,
            Merge::ConnectedSum { .. } => 1,
        }
    }
}

/// Boundary component of an assembly leaving through an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Port {
    pub edge: EdgeId,
    /// Side of the vertex the edge lies on.
    pub side: End,
    pub component: ComponentRef,
    /// Indices of attachment blocks applied to the component, in order.
    pub attachments: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    HeightCap,
    KleinCap,
    FoldCap,
    OrientableFoldCap,
    /// Sphere splitter with attachments, no odd-negative edges.
    SphereVertex,
    /// Sphere vertex folded onto one side.
    FoldedSphereVertex,
    /// Equal numbers of odd-negative edges on both sides.
    BalancedChannels,
    /// Unequal numbers, balanced through non-orientable merges.
    CorrectedChannels,
    /// Odd-negative edges at an extremum, split evenly and folded.
    FoldedChannels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanFlag {
    /// Extremum assembly with odd-negative edges; the balancing split is
    /// our own choice and only checked by the verifier.
    #[serde(rename = "part2-unverified")]
    Part2Unverified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexAssembly {
    pub height: f64,
    pub interval: [f64; 2],
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<PlanFlag>,
    pub blocks: Vec<BlockInstance>,
    pub merges: Vec<Merge>,
    pub ports: Vec<Port>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Attachments {
    pub klein: u32,
    pub torus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSchedule {
    pub lower: String,
    pub upper: String,
    pub label: i64,
    pub at_lower: Attachments,
    pub at_upper: Attachments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientability {
    Orientable,
    /// Some level set is non-orientable; no claim is made about the total
    /// space.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub coverage: Coverage,
    pub orientability: Orientability,
    pub epsilon: f64,
    pub vertices: BTreeMap<String, VertexAssembly>,
    pub edges: Vec<EdgeSchedule>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("input is outside both label criteria")]
    NotCovered,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("label {label} on edge {edge} exceeds the planner limit {MAX_PLANNED_LABEL}")]
    LabelTooLarge { edge: EdgeId, label: i64 },
    #[error("vertex {vertex}: {detail}")]
    Internal { vertex: String, detail: String },
}

impl PlanError {
    pub fn is_internal(&self) -> bool {
        matches!(self, PlanError::Internal { .. })
    }
}

/// Counts attachments on a port by kind.
pub fn count_attachments(assembly: &VertexAssembly, port: &Port) -> Attachments {
    let mut out = Attachments::default();
    for &i in &port.attachments {
        match assembly.blocks.get(i).map(|b| b.kind) {
            Some(BlockKind::KleinAttach { .. }) => out.klein += 1,
            Some(BlockKind::TorusAttach { .. }) => out.torus += 1,
            _ => {}
        }
    }
    out
}

/// One third of the smallest gap between distinct vertex values.
pub fn vertex_epsilon(f: &GoodFunction) -> Option<f64> {
    let mut values: Vec<f64> = f.values().values().copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values.windows(2).map(|w| w[1] - w[0]).min_by(f64::total_cmp).map(|gap| gap / 3.0)
}

/// Builds the full plan for an accepted input.
pub fn plan(g: &LabeledGraph, f: &GoodFunction, report: &RealizabilityReport) -> Result<ConstructionPlan, PlanError> {
    if !report.accepted() {
        return Err(PlanError::NotCovered);
    }
    for e in g.edge_ids() {
        let label = g.label(e);
        if label.unsigned_abs() > MAX_PLANNED_LABEL {
            return Err(PlanError::LabelTooLarge { edge: e, label });
        }
    }
    let epsilon =
        vertex_epsilon(f).ok_or_else(|| PlanError::InvalidInput("need at least two distinct vertex values".into()))?;

    let mut vertices = BTreeMap::new();
    for v in g.vertices() {
        let assembly = plan_vertex(g, f, v, epsilon)?;
        vertices.insert(g.name(v).to_string(), assembly);
    }

    let mut edges = Vec::with_capacity(g.edge_count());
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let (lo, hi) = f.orient(edge).ok_or_else(|| PlanError::InvalidInput(format!("edge {e} is not injective")))?;
        let schedule_at = |name: &str| -> Attachments {
            let asm = &vertices[name];
            asm.ports.iter().find(|p| p.edge == e).map(|p| count_attachments(asm, p)).unwrap_or_default()
        };
        edges.push(EdgeSchedule {
            lower: g.name(lo).to_string(),
            upper: g.name(hi).to_string(),
            label: edge.label,
            at_lower: schedule_at(g.name(lo)),
            at_upper: schedule_at(g.name(hi)),
        });
    }

    let orientability =
        if g.edges().iter().any(|e| e.label < 0) { Orientability::Unresolved } else { Orientability::Orientable };
    Ok(ConstructionPlan { coverage: report.coverage, orientability, epsilon, vertices, edges })
}

impl ConstructionPlan {
    /// Copy with one attachment block removed from a vertex assembly, block
    /// indices renumbered and the edge schedule kept consistent. Returns
    /// `None` if the block is not an attachment.
    pub fn without_attachment(&self, vertex: &str, block: usize) -> Option<ConstructionPlan> {
        let mut out = self.clone();
        let asm = out.vertices.get_mut(vertex)?;
        if !asm.blocks.get(block)?.kind.is_attachment() {
            return None;
        }
        let kind = asm.blocks.remove(block).kind;
        let shift = |i: usize| if i > block { i - 1 } else { i };
        let mut edge = None;
        for port in &mut asm.ports {
            if port.attachments.contains(&block) {
                edge = Some((port.edge, port.side));
            }
            port.attachments.retain(|&i| i != block);
            for i in &mut port.attachments {
                *i = shift(*i);
            }
            port.component.block = shift(port.component.block);
        }
        for m in &mut asm.merges {
            match m {
                Merge::Disjoint { first, second } => {
                    *first = shift(*first);
                    *second = shift(*second);
                }
                Merge::ConnectedSum { first, second } => {
                    first.block = shift(first.block);
                    second.block = shift(second.block);
                }
            }
        }
        if let Some((e, _)) = edge {
            let schedule = &mut out.edges[e.0];
            let counts = if schedule.lower == vertex { &mut schedule.at_lower } else { &mut schedule.at_upper };
            match kind {
                BlockKind::KleinAttach { .. } => counts.klein -= 1,
                BlockKind::TorusAttach { .. } => counts.torus -= 1,
                _ => unreachable!(),
            }
        }
        Some(out)
    }

    /// Every `(vertex, block index)` holding an attachment.
    pub fn attachment_sites(&self) -> Vec<(String, usize)> {
        self.vertices
            .iter()
            .flat_map(|(name, asm)| {
                asm.blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.kind.is_attachment())
                    .map(move |(i, _)| (name.clone(), i))
            })
            .collect()
    }
}
