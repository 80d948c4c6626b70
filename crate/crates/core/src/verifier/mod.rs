//! Independent verification of construction plans.
//!
//! The verifier re-derives every block interface from the catalog, sweeps
//! the assemblies bottom to top to rebuild the Reeb graph of the glued
//! function, and searches for a height-preserving labelled isomorphism
//! with the input graph. It shares no code with the planner beyond the
//! data types.

mod audit;
mod iso;
mod sweep;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::End;
use crate::graph::{EdgeId, GoodFunction, LabeledGraph};
use crate::planner::ConstructionPlan;
use crate::surface::SurfaceClass;

pub use audit::{audit_block, audit_counts, check_schedule, CountSummary, VertexCounts};
pub use iso::{check_iso, validate_witness, Witness};
pub use sweep::{sweep, ReconstructedReeb};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("vertex {vertex}: {detail}")]
    Structural { vertex: String, detail: String },
    #[error("vertex {vertex}, {end} side, edge {edge}: expected {expected}, found {found}")]
    InterfaceMismatch { vertex: String, end: EndName, edge: EdgeId, expected: SurfaceClass, found: SurfaceClass },
    #[error("edge {edge} at vertex {vertex} is not glued to any component")]
    DanglingEdge { vertex: String, edge: EdgeId },
    #[error("vertex {vertex}: block {block} {end} slot {slot} is not claimed by any edge")]
    DanglingComponent { vertex: String, block: usize, end: EndName, slot: usize },
    #[error("intervals of {first} and {second} overlap")]
    IntervalOverlap { first: String, second: String },
    #[error("vertex {vertex}, block {block}: {detail}")]
    CountMismatch { vertex: String, block: usize, detail: String },
    #[error("vertex {vertex}: {detail}")]
    Classification { vertex: String, detail: String },
    #[error("vertex {vertex}: level sets change by {delta} in Euler characteristic across {points} Morse points")]
    EulerStep { vertex: String, delta: i128, points: u64 },
    #[error("edge {edge}: {detail}")]
    ScheduleMismatch { edge: EdgeId, detail: String },
    #[error("reconstructed graph is not isomorphic to the input: {0}")]
    NotIsomorphic(String),
}

/// Display helper for [`End`] inside error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndName(pub End);

impl fmt::Display for EndName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            End::Lower => "lower",
            End::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub counts: CountSummary,
    pub vertices: usize,
    pub edges: usize,
    /// Vertices whose assembly carries the `part2-unverified` flag.
    pub flagged: Vec<String>,
}

/// Full verification of `plan` against the input graph and function.
pub fn verify(plan: &ConstructionPlan, g: &LabeledGraph, f: &GoodFunction) -> Result<VerifyReport, VerifyError> {
    let counts = audit_counts(plan)?;
    check_schedule(plan)?;
    let rebuilt = sweep(plan)?;
    let witness = check_iso(&rebuilt.graph, g, f)?;
    validate_witness(&rebuilt.graph, g, f, &witness).map_err(VerifyError::NotIsomorphic)?;
    let flagged = plan.vertices.iter().filter(|(_, a)| !a.flags.is_empty()).map(|(name, _)| name.clone()).collect();
    Ok(VerifyReport { counts, vertices: rebuilt.graph.vertex_count(), edges: rebuilt.graph.edge_count(), flagged })
}
