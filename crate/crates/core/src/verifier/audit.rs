use std::collections::BTreeMap;

use serde::Serialize;

use crate::catalog::{catalog_entry, fold_grid, BlockInstance, BlockKind, End, FoldFiber};
use crate::graph::{EdgeId, Extremum};
use crate::planner::{count_attachments, ConstructionPlan, VertexAssembly};

use super::{EndName, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VertexCounts {
    pub morse_points: u64,
    pub non_morse_blocks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CountSummary {
    pub morse_points: u64,
    pub non_morse_blocks: u64,
    pub per_vertex: BTreeMap<String, VertexCounts>,
}

fn mismatch(vertex: &str, block: usize, detail: impl Into<String>) -> VerifyError {
    VerifyError::CountMismatch { vertex: vertex.to_string(), block, detail: detail.into() }
}

/// Checks one block against its catalog entry.
pub fn audit_block(vertex: &str, index: usize, block: &BlockInstance) -> Result<(), VerifyError> {
    let entry = catalog_entry(&block.kind).map_err(|e| mismatch(vertex, index, e.to_string()))?;
    for (end, declared, expected) in
        [(End::Lower, &block.lower, &entry.lower), (End::Upper, &block.upper, &entry.upper)]
    {
        if let Some(expected) = expected {
            if declared != expected {
                return Err(mismatch(
                    vertex,
                    index,
                    format!("{} {} interface differs from the catalog", block.kind.name(), EndName(end)),
                ));
            }
        }
    }
    if block.singular_points != entry.singular_points {
        return Err(mismatch(
            vertex,
            index,
            format!("declares {} singular points, catalog has {}", block.singular_points, entry.singular_points),
        ));
    }
    if block.morse != entry.morse {
        return Err(mismatch(vertex, index, "Morse tag differs from the catalog"));
    }
    let [a, b] = block.interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(mismatch(vertex, index, "empty or non-finite interval"));
    }
    if block.singular_values.iter().any(|t| !(a < *t && *t < b)) {
        return Err(mismatch(vertex, index, "singular value outside the block interval"));
    }
    match (block.kind, &block.fiber) {
        (BlockKind::FoldCap { fiber: FoldFiber::NonOrientable { l0 }, .. }, Some(fiber)) => {
            let eps = (b - a) / 2.0;
            if fiber.handles != 2 * l0 {
                return Err(mismatch(vertex, index, "fold fiber has the wrong number of crosscaps"));
            }
            let expected: Vec<f64> = fold_grid(l0, eps).into_iter().flat_map(|t| [t, t]).collect();
            let close = fiber.singular_values.len() == expected.len()
                && fiber.singular_values.iter().zip(&expected).all(|(x, y)| (x - y).abs() <= 1e-12 * eps.max(1.0));
            if !close {
                return Err(mismatch(vertex, index, "fold fiber singular values are off the grid"));
            }
        }
        (BlockKind::FoldCap { fiber: FoldFiber::NonOrientable { .. }, .. }, None) => {
            return Err(mismatch(vertex, index, "fold cap without its fiber"));
        }
        (_, Some(_)) if !matches!(block.kind, BlockKind::FoldCap { .. }) => {
            return Err(mismatch(vertex, index, "fiber data on a block without one"));
        }
        _ => {}
    }
    Ok(())
}

fn expected_cap(extremum: Extremum, label: i64) -> Option<BlockKind> {
    match label {
        0 => Some(BlockKind::HeightCap { extremum }),
        -2 => Some(BlockKind::KleinCap { extremum }),
        r if r < -2 && r % 2 == 0 => Some(BlockKind::FoldCap {
            extremum,
            fiber: FoldFiber::NonOrientable { l0: u32::try_from((r.unsigned_abs() - 2) / 2).ok()? },
        }),
        r if r > 0 => Some(BlockKind::FoldCap { extremum, fiber: FoldFiber::Orientable { genus: r as u64 } }),
        _ => None,
    }
}

fn classify(name: &str, asm: &VertexAssembly, plan: &ConstructionPlan) -> Result<(), VerifyError> {
    let err = |detail: String| VerifyError::Classification { vertex: name.to_string(), detail };
    let lower = asm.ports.iter().filter(|p| p.side == End::Lower).count();
    let upper = asm.ports.len() - lower;
    let folds: Vec<Extremum> = asm
        .blocks
        .iter()
        .filter_map(|b| match b.kind {
            BlockKind::ExtremumFold { extremum } => Some(extremum),
            _ => None,
        })
        .collect();
    let caps = asm.blocks.iter().filter(|b| b.kind.is_cap()).count();
    let extremum = match (lower, upper) {
        (0, 0) => return Err(err("no incident edges".into())),
        (0, _) => Some(Extremum::Min),
        (_, 0) => Some(Extremum::Max),
        _ => None,
    };
    match extremum {
        None => {
            if let Some(i) = asm.blocks.iter().position(|b| !b.morse) {
                return Err(err(format!("non-Morse block {} at a non-extremum vertex", asm.blocks[i].kind.name())));
            }
        }
        Some(ext) if asm.ports.len() == 1 => {
            let port = &asm.ports[0];
            let label = plan
                .edges
                .get(port.edge.0)
                .map(|s| s.label)
                .ok_or_else(|| err(format!("port on unknown edge {}", port.edge)))?;
            let expected = expected_cap(ext, label).ok_or_else(|| err(format!("no cap realizes label {label}")))?;
            let present: Vec<BlockKind> = asm.blocks.iter().filter(|b| b.kind.is_cap()).map(|b| b.kind).collect();
            if present != [expected] {
                return Err(err(format!("leaf with label {label} needs exactly one {}", expected.name())));
            }
            if !folds.is_empty() {
                return Err(err("fold wrapper on a leaf".into()));
            }
        }
        Some(ext) => {
            if folds != [ext] || caps != 0 {
                return Err(err("extremum of degree > 1 needs exactly one matching fold wrapper".into()));
            }
        }
    }
    if extremum.is_none() && (!folds.is_empty() || caps != 0) {
        return Err(err("cap or fold at a non-extremum vertex".into()));
    }
    Ok(())
}

/// Re-derives block data from the catalog and totals the singular points.
pub fn audit_counts(plan: &ConstructionPlan) -> Result<CountSummary, VerifyError> {
    let mut summary = CountSummary::default();
    for (name, asm) in &plan.vertices {
        let mut counts = VertexCounts::default();
        for (i, block) in asm.blocks.iter().enumerate() {
            audit_block(name, i, block)?;
            counts.morse_points += u64::from(block.singular_points);
            if !block.morse {
                counts.non_morse_blocks += 1;
            }
            let [a, b] = block.interval;
            if a < asm.interval[0] || b > asm.interval[1] {
                return Err(mismatch(name, i, "block interval leaves the vertex interval"));
            }
        }
        counts.morse_points += asm.merges.iter().map(|m| u64::from(m.singular_points())).sum::<u64>();
        classify(name, asm, plan)?;
        summary.morse_points += counts.morse_points;
        summary.non_morse_blocks += counts.non_morse_blocks;
        summary.per_vertex.insert(name.clone(), counts);
    }
    Ok(summary)
}

/// Checks the per-edge attachment schedule against the ports.
pub fn check_schedule(plan: &ConstructionPlan) -> Result<(), VerifyError> {
    for (i, schedule) in plan.edges.iter().enumerate() {
        let edge = EdgeId(i);
        let err = |detail: String| VerifyError::ScheduleMismatch { edge, detail };
        for (vertex, side, expected) in
            [(&schedule.lower, End::Upper, schedule.at_lower), (&schedule.upper, End::Lower, schedule.at_upper)]
        {
            let asm = plan.vertices.get(vertex).ok_or_else(|| err(format!("unknown vertex {vertex}")))?;
            let port = asm.ports.iter().find(|p| p.edge == edge).ok_or_else(|| err(format!("no port at {vertex}")))?;
            if port.side != side {
                return Err(err(format!("port at {vertex} is on the {} side", EndName(port.side))));
            }
            if count_attachments(asm, port) != expected {
                return Err(err(format!("attachments at {vertex} differ from the schedule")));
            }
        }
    }
    for (name, asm) in &plan.vertices {
        for port in &asm.ports {
            let known = plan.edges.get(port.edge.0).is_some_and(|s| &s.lower == name || &s.upper == name);
            if !known {
                return Err(VerifyError::ScheduleMismatch {
                    edge: port.edge,
                    detail: format!("port at {name} is not in the schedule"),
                });
            }
        }
    }
    Ok(())
}
