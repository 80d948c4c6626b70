//! Local building blocks of the constructions.
//!
//! Every block is a function on a compact 3-manifold onto a short interval
//! `[a, b]` around a vertex value. Its interface is the pair of level sets
//! over `a` and `b`, recorded as multisets of closed surfaces; the analytic
//! germs are not modelled. Blocks marked non-Morse have a degenerate
//! singular set and declare no isolated singular points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Extremum;
use crate::surface::SurfaceClass;

/// Which end of a block, or which side of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Lower,
    Upper,
}

impl End {
    pub fn flip(self) -> End {
        match self {
            End::Lower => End::Upper,
            End::Upper => End::Lower,
        }
    }
}

/// Placement of the special surface of a directional block: `Up` puts it on
/// the upper end, the plain side (spheres, or projective planes for
/// [`BlockKind::NonorMerge`]) below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// Direction whose plain side faces a component on `end` of the
    /// block it is attached to.
    pub fn facing(end: End) -> Direction {
        match end {
            End::Upper => Direction::Up,
            End::Lower => Direction::Down,
        }
    }
}

/// Boundary of a fold cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FoldFiber {
    /// `N_{2 + 2 l0}` built from a fiber surface with `2 l0` crosscaps.
    NonOrientable { l0: u32 },
    /// Orientable surface of positive genus.
    Orientable { genus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BlockKind {
    /// Sphere splitter/merger: `down` spheres below, `up` spheres above.
    MorseVertex { down: u32, up: u32 },
    /// Sphere on the plain side, Klein bottle on the other.
    KleinAttach { direction: Direction },
    /// Sphere on the plain side, torus on the other.
    TorusAttach { direction: Direction },
    /// Projective plane on both ends, two singular points at one value.
    ProjChannel,
    /// `l + 1` projective planes on the plain side, `N_{1+l}` on the other.
    NonorMerge { l: u32, direction: Direction },
    /// Height function closing off a sphere.
    HeightCap { extremum: Extremum },
    /// Special generic composite closing off a Klein bottle.
    KleinCap { extremum: Extremum },
    /// Fold-map composite closing off a surface other than `S^2` and `N_2`.
    FoldCap { extremum: Extremum, fiber: FoldFiber },
    /// Folds a whole vertex assembly onto one side of the vertex value.
    ExtremumFold { extremum: Extremum },
}

impl BlockKind {
    pub fn is_attachment(&self) -> bool {
        matches!(self, BlockKind::KleinAttach { .. } | BlockKind::TorusAttach { .. })
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, BlockKind::HeightCap { .. } | BlockKind::KleinCap { .. } | BlockKind::FoldCap { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BlockKind::MorseVertex { .. } => "morse_vertex",
            BlockKind::KleinAttach { .. } => "klein_attach",
            BlockKind::TorusAttach { .. } => "torus_attach",
            BlockKind::ProjChannel => "proj_channel",
            BlockKind::NonorMerge { .. } => "nonor_merge",
            BlockKind::HeightCap { .. } => "height_cap",
            BlockKind::KleinCap { .. } => "klein_cap",
            BlockKind::FoldCap { .. } => "fold_cap",
            BlockKind::ExtremumFold { .. } => "extremum_fold",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("illegal parameters for {kind}: {reason}")]
    IllegalParameter { kind: &'static str, reason: String },
    #[error("interval [{0}, {1}] is empty or not finite")]
    BadInterval(f64, f64),
}

fn illegal(kind: &BlockKind, reason: impl Into<String>) -> CatalogError {
    CatalogError::IllegalParameter { kind: kind.name(), reason: reason.into() }
}

/// Interface data a kind prescribes. `None` on an end means the interface is
/// inherited from wrapped blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub lower: Option<Vec<SurfaceClass>>,
    pub upper: Option<Vec<SurfaceClass>>,
    pub singular_points: u32,
    pub morse: bool,
}

fn capped(extremum: Extremum, open: SurfaceClass) -> (Option<Vec<SurfaceClass>>, Option<Vec<SurfaceClass>>) {
    match extremum {
        Extremum::Min => (Some(vec![]), Some(vec![open])),
        Extremum::Max => (Some(vec![open]), Some(vec![])),
    }
}

fn directed(
    direction: Direction,
    plain: Vec<SurfaceClass>,
    special: Vec<SurfaceClass>,
) -> (Option<Vec<SurfaceClass>>, Option<Vec<SurfaceClass>>) {
    match direction {
        Direction::Up => (Some(plain), Some(special)),
        Direction::Down => (Some(special), Some(plain)),
    }
}

/// Minimal Morse point count of a sphere splitter: merging `down` spheres
/// takes `down - 1` points, splitting into `up` takes `up - 1`; the
/// one-in one-out case still needs a cancelling pair to be singular.
pub fn morse_vertex_points(down: u32, up: u32) -> u32 {
    match down + up {
        0 | 1 => 0,
        2 => 2,
        n => n - 2,
    }
}

/// Looks up the interface data of a kind.
pub fn catalog_entry(kind: &BlockKind) -> Result<CatalogEntry, CatalogError> {
    let sphere = SurfaceClass::SPHERE;
    let (lower, upper, singular_points, morse) = match *kind {
        BlockKind::MorseVertex { down, up } => {
            if down == 0 || up == 0 {
                return Err(illegal(kind, "both sides need at least one sphere"));
            }
            let n = |k: u32| vec![sphere; k as usize];
            (Some(n(down)), Some(n(up)), morse_vertex_points(down, up), true)
        }
        BlockKind::KleinAttach { direction } => {
            let (l, u) = directed(direction, vec![sphere], vec![SurfaceClass::KLEIN_BOTTLE]);
            (l, u, 1, true)
        }
        BlockKind::TorusAttach { direction } => {
            let (l, u) = directed(direction, vec![sphere], vec![SurfaceClass::TORUS]);
            (l, u, 1, true)
        }
        BlockKind::ProjChannel => {
            (Some(vec![SurfaceClass::PROJECTIVE_PLANE]), Some(vec![SurfaceClass::PROJECTIVE_PLANE]), 2, true)
        }
        BlockKind::NonorMerge { l, direction } => {
            if l == 0 {
                return Err(illegal(kind, "l must be at least 1"));
            }
            let special = SurfaceClass::non_orientable(1 + l as u64).expect("small genus");
            let plain = vec![SurfaceClass::PROJECTIVE_PLANE; l as usize + 1];
            let (lo, up) = directed(direction, plain, vec![special]);
            (lo, up, l, true)
        }
        BlockKind::HeightCap { extremum } => {
            let (l, u) = capped(extremum, sphere);
            (l, u, 1, true)
        }
        BlockKind::KleinCap { extremum } => {
            let (l, u) = capped(extremum, SurfaceClass::KLEIN_BOTTLE);
            (l, u, 0, false)
        }
        BlockKind::FoldCap { extremum, fiber } => {
            let open = match fiber {
                FoldFiber::NonOrientable { l0 } => {
                    if l0 == 0 {
                        return Err(illegal(kind, "l0 must be at least 1"));
                    }
                    SurfaceClass::non_orientable(2 + 2 * l0 as u64).expect("small genus")
                }
                FoldFiber::Orientable { genus } => {
                    if genus == 0 {
                        return Err(illegal(kind, "orientable fold caps need positive genus"));
                    }
                    SurfaceClass::orientable(genus).ok_or_else(|| illegal(kind, "genus out of range"))?
                }
            };
            let (l, u) = capped(extremum, open);
            (l, u, 0, false)
        }
        BlockKind::ExtremumFold { extremum } => match extremum {
            Extremum::Min => (Some(vec![]), None, 0, false),
            Extremum::Max => (None, Some(vec![]), 0, false),
        },
    };
    Ok(CatalogEntry { lower, upper, singular_points, morse })
}

/// Two-dimensional Morse function on a sphere with `handles` crosscaps and
/// two boundary circles, used as the fiber of a fold cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceBlock {
    pub handles: u32,
    /// Singular values in the fiber coordinate `[-eps, eps]`, one per point.
    pub singular_values: Vec<f64>,
}

/// Grid of `l0` values: `0` alone for `l0 = 1`, otherwise evenly spaced
/// from `-eps/2` to `eps/2`.
pub fn fold_grid(l0: u32, epsilon: f64) -> Vec<f64> {
    if l0 == 1 {
        return vec![0.0];
    }
    let step = epsilon / (l0 - 1) as f64;
    (0..l0).map(|j| if j == l0 - 1 { epsilon / 2.0 } else { -epsilon / 2.0 + j as f64 * step }).collect()
}

/// Fiber of `FoldCap(l0)`: `2 l0` crosscaps, two singular points on each
/// grid value.
pub fn fold_fiber(l0: u32, epsilon: f64) -> SurfaceBlock {
    let singular_values = fold_grid(l0, epsilon).into_iter().flat_map(|t| [t, t]).collect();
    SurfaceBlock { handles: 2 * l0, singular_values }
}

/// Local Reeb graph of a block: a star around one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalReeb {
    pub down_legs: usize,
    pub up_legs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockInstance {
    pub kind: BlockKind,
    pub interval: [f64; 2],
    pub singular_values: Vec<f64>,
    pub lower: Vec<SurfaceClass>,
    pub upper: Vec<SurfaceClass>,
    pub singular_points: u32,
    pub morse: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<SurfaceBlock>,
}

impl BlockInstance {
    pub fn interface(&self, end: End) -> &[SurfaceClass] {
        match end {
            End::Lower => &self.lower,
            End::Upper => &self.upper,
        }
    }

    pub fn local_reeb(&self) -> LocalReeb {
        LocalReeb { down_legs: self.lower.len(), up_legs: self.upper.len() }
    }
}

/// Declared boundary multiset at one end.
pub fn interface_of(block: &BlockInstance, end: End) -> &[SurfaceClass] {
    block.interface(end)
}

fn check_interval(interval: [f64; 2]) -> Result<(), CatalogError> {
    let [a, b] = interval;
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(CatalogError::BadInterval(a, b))
    }
}

/// Builds a block over `interval` with its singular value at the midpoint.
///
/// [`BlockKind::ExtremumFold`] has no fixed open end; use
/// [`instantiate_fold`] for it.
pub fn instantiate(kind: BlockKind, interval: [f64; 2]) -> Result<BlockInstance, CatalogError> {
    check_interval(interval)?;
    let entry = catalog_entry(&kind)?;
    let (Some(lower), Some(upper)) = (entry.lower, entry.upper) else {
        return Err(illegal(&kind, "interface depends on the wrapped assembly"));
    };
    let center = (interval[0] + interval[1]) / 2.0;
    let fiber = match kind {
        BlockKind::FoldCap { fiber: FoldFiber::NonOrientable { l0 }, .. } => {
            Some(fold_fiber(l0, (interval[1] - interval[0]) / 2.0))
        }
        _ => None,
    };
    Ok(BlockInstance {
        kind,
        interval,
        singular_values: vec![center],
        lower,
        upper,
        singular_points: entry.singular_points,
        morse: entry.morse,
        fiber,
    })
}

/// Wrapper turning an assembly into a local extremum; `open` is the level
/// set of the wrapped assembly on the side away from the extremum.
pub fn instantiate_fold(
    extremum: Extremum,
    interval: [f64; 2],
    open: Vec<SurfaceClass>,
) -> Result<BlockInstance, CatalogError> {
    check_interval(interval)?;
    let kind = BlockKind::ExtremumFold { extremum };
    let (lower, upper) = match extremum {
        Extremum::Min => (vec![], open),
        Extremum::Max => (open, vec![]),
    };
    Ok(BlockInstance {
        kind,
        interval,
        singular_values: vec![(interval[0] + interval[1]) / 2.0],
        lower,
        upper,
        singular_points: 0,
        morse: false,
        fiber: None,
    })
}
