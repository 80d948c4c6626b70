use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::catalog::{instantiate, instantiate_fold, BlockInstance, BlockKind, Direction, End, FoldFiber};
use crate::graph::{edge_stars, EdgeId, EdgeStars, Extremum, GoodFunction, LabeledGraph, VertexId};
use crate::realizability::rg_prime;
use crate::surface::SurfaceClass;

use super::correction::choose_correction_set;
use super::{ComponentRef, Construction, Merge, PlanError, PlanFlag, Port, VertexAssembly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Style {
    /// Klein bottles for every non-orientable target.
    Klein,
    /// Tori when the base is already non-orientable.
    TorusOnNonorientable,
}

struct Builder<'a> {
    g: &'a LabeledGraph,
    vertex: String,
    interval: [f64; 2],
    blocks: Vec<BlockInstance>,
    merges: Vec<Merge>,
    ports: Vec<Port>,
}

impl<'a> Builder<'a> {
    fn internal(&self, detail: impl Into<String>) -> PlanError {
        PlanError::Internal { vertex: self.vertex.clone(), detail: detail.into() }
    }

    fn add(&mut self, kind: BlockKind) -> Result<usize, PlanError> {
        let block = instantiate(kind, self.interval).map_err(|e| self.internal(e.to_string()))?;
        self.blocks.push(block);
        Ok(self.blocks.len() - 1)
    }

    fn class_of(&self, c: ComponentRef) -> Option<SurfaceClass> {
        self.blocks.get(c.block)?.interface(c.end).get(c.slot).copied()
    }

    /// Connected sum over every component fused with `c`.
    fn fused_class(&self, c: ComponentRef) -> Option<SurfaceClass> {
        let mut seen = BTreeSet::from([c]);
        let mut queue = VecDeque::from([c]);
        let mut class = self.class_of(c)?;
        while let Some(x) = queue.pop_front() {
            for m in &self.merges {
                let Merge::ConnectedSum { first, second } = *m else { continue };
                let next = if first == x {
                    second
                } else if second == x {
                    first
                } else {
                    continue;
                };
                if seen.insert(next) {
                    class = class.connected_sum(self.class_of(next)?);
                    queue.push_back(next);
                }
            }
        }
        Some(class)
    }

    fn port(&mut self, edge: EdgeId, side: End, component: ComponentRef, style: Style) -> Result<(), PlanError> {
        let base = self
            .fused_class(component)
            .ok_or_else(|| self.internal(format!("edge {edge} points at a missing component")))?;
        let target = SurfaceClass::from_label(self.g.label(edge));
        let kinds = corrections(base, target, side, style)
            .ok_or_else(|| self.internal(format!("edge {edge}: cannot raise {base} to {target}")))?;
        let mut attachments = Vec::with_capacity(kinds.len());
        for kind in kinds {
            attachments.push(self.add(kind)?);
        }
        self.ports.push(Port { edge, side, component, attachments });
        Ok(())
    }

    fn finish(self, height: f64, construction: Construction, flags: Vec<PlanFlag>) -> VertexAssembly {
        let mut ports = self.ports;
        ports.sort_by_key(|p| p.edge);
        VertexAssembly {
            height,
            interval: self.interval,
            construction,
            flags,
            blocks: self.blocks,
            merges: self.merges,
            ports,
        }
    }
}

/// Attachment blocks turning `base` into `target` on a port on `side`.
fn corrections(base: SurfaceClass, target: SurfaceClass, side: End, style: Style) -> Option<Vec<BlockKind>> {
    let direction = Direction::facing(side);
    let gap = base.euler_char() - target.euler_char();
    if gap < 0 || gap % 2 != 0 {
        return None;
    }
    let count = (gap / 2) as usize;
    let kind = match (target.is_orientable(), base.is_orientable()) {
        (true, true) => BlockKind::TorusAttach { direction },
        (true, false) => return None,
        (false, true) if count == 0 => return None,
        (false, true) => BlockKind::KleinAttach { direction },
        (false, false) => match style {
            Style::Klein => BlockKind::KleinAttach { direction },
            Style::TorusOnNonorientable => BlockKind::TorusAttach { direction },
        },
    };
    Some(vec![kind; count])
}

/// Edges of an assembly split by the inner side they attach to.
struct Layout {
    /// Paired odd-negative edges, one projective channel each.
    a_low: Vec<EdgeId>,
    a_up: Vec<EdgeId>,
    rest_low: Vec<EdgeId>,
    rest_up: Vec<EdgeId>,
    /// Edges receiving a non-orientable merge and the amount `r''` used.
    corrections: Vec<(EdgeId, u64)>,
    correction_side: End,
    /// Edges moved onto the plain side of the merges.
    moved: Vec<EdgeId>,
}

impl Layout {
    fn plain(a_low: Vec<EdgeId>, a_up: Vec<EdgeId>, rest_low: Vec<EdgeId>, rest_up: Vec<EdgeId>) -> Self {
        Layout { a_low, a_up, rest_low, rest_up, corrections: vec![], correction_side: End::Lower, moved: vec![] }
    }
}

/// Lays out channels, the residual sphere vertex and the merges. `outer`
/// forces every port onto one side (fold assemblies).
fn build_channels(b: &mut Builder<'_>, layout: &Layout, outer: Option<End>) -> Result<(), PlanError> {
    if layout.a_low.len() != layout.a_up.len() {
        return Err(b.internal("unbalanced odd-negative pairing"));
    }
    let mut components: BTreeMap<EdgeId, (End, ComponentRef)> = BTreeMap::new();

    let mut first_channel = None;
    for (&lo, &up) in layout.a_low.iter().zip(&layout.a_up) {
        let idx = b.add(BlockKind::ProjChannel)?;
        match first_channel {
            None => first_channel = Some(idx),
            Some(first) => b.merges.push(Merge::Disjoint { first, second: idx }),
        }
        components.insert(lo, (End::Lower, ComponentRef::new(idx, End::Lower, 0)));
        components.insert(up, (End::Upper, ComponentRef::new(idx, End::Upper, 0)));
    }

    let (dl, du) = (layout.rest_low.len(), layout.rest_up.len());
    let mut phantom = None;
    if dl + du > 0 {
        let idx = b.add(BlockKind::MorseVertex { down: dl.max(1) as u32, up: du.max(1) as u32 })?;
        for (i, &e) in layout.rest_low.iter().enumerate() {
            components.insert(e, (End::Lower, ComponentRef::new(idx, End::Lower, i)));
        }
        for (i, &e) in layout.rest_up.iter().enumerate() {
            components.insert(e, (End::Upper, ComponentRef::new(idx, End::Upper, i)));
        }
        if dl == 0 {
            phantom = Some(ComponentRef::new(idx, End::Lower, 0));
        } else if du == 0 {
            phantom = Some(ComponentRef::new(idx, End::Upper, 0));
        } else if let Some(first) = first_channel {
            b.merges.push(Merge::Disjoint { first, second: idx });
        }
    }

    let side = layout.correction_side;
    let direction = Direction::facing(side);
    let mut moved = layout.moved.iter();
    let mut first_plain = None;
    for &(e, amount) in &layout.corrections {
        let l = u32::try_from(amount - 1).map_err(|_| b.internal("correction amount out of range"))?;
        let idx = b.add(BlockKind::NonorMerge { l, direction })?;
        let (_, target) =
            *components.get(&e).ok_or_else(|| b.internal(format!("correction edge {e} has no component")))?;
        b.merges.push(Merge::ConnectedSum { first: ComponentRef::new(idx, side, 0), second: target });
        for slot in 0..amount as usize {
            let moved_edge = *moved.next().ok_or_else(|| b.internal("correction exceeds moved edges"))?;
            components.insert(moved_edge, (side.flip(), ComponentRef::new(idx, side.flip(), slot)));
        }
        first_plain.get_or_insert(ComponentRef::new(idx, side.flip(), 0));
    }
    if moved.next().is_some() {
        return Err(b.internal("moved edges left without a merge"));
    }

    if let Some(p) = phantom {
        let target = match first_channel {
            Some(c) => Some(ComponentRef::new(c, p.end, 0)),
            None => first_plain.filter(|c| c.end == p.end),
        };
        let target = target.ok_or_else(|| b.internal("sphere vertex cannot be attached"))?;
        b.merges.push(Merge::ConnectedSum { first: p, second: target });
    }

    let style = if layout.corrections.is_empty() { Style::Klein } else { Style::TorusOnNonorientable };
    for (e, (inner, component)) in components {
        b.port(e, outer.unwrap_or(inner), component, style)?;
    }
    Ok(())
}

fn minus(all: &[EdgeId], removed: &[EdgeId]) -> Vec<EdgeId> {
    all.iter().copied().filter(|e| !removed.contains(e)).collect()
}

fn cap_kind(extremum: Extremum, label: i64) -> Option<(BlockKind, Construction)> {
    match label {
        0 => Some((BlockKind::HeightCap { extremum }, Construction::HeightCap)),
        -2 => Some((BlockKind::KleinCap { extremum }, Construction::KleinCap)),
        r if r < 0 && r % 2 == 0 => {
            let l0 = u32::try_from((r.unsigned_abs() - 2) / 2).ok()?;
            Some((BlockKind::FoldCap { extremum, fiber: FoldFiber::NonOrientable { l0 } }, Construction::FoldCap))
        }
        r if r > 0 => Some((
            BlockKind::FoldCap { extremum, fiber: FoldFiber::Orientable { genus: r as u64 } },
            Construction::OrientableFoldCap,
        )),
        _ => None,
    }
}

fn budget(b: &Builder<'_>, edges: &[EdgeId]) -> Result<Vec<(EdgeId, u64)>, PlanError> {
    let mut out = Vec::new();
    for &e in edges {
        let r = rg_prime(b.g.label(e)).map_err(|err| b.internal(err.to_string()))?;
        if r > 0 {
            out.push((e, r));
        }
    }
    Ok(out)
}

fn corrected_layout(b: &Builder<'_>, stars: &EdgeStars, d: i64) -> Result<Layout, PlanError> {
    let target = d.unsigned_abs();
    let (side, candidates, surplus) =
        if d > 0 { (End::Lower, &stars.b_low, &stars.a_up) } else { (End::Upper, &stars.b_up, &stars.a_low) };
    let chosen = choose_correction_set(target, &budget(b, candidates)?).map_err(|err| b.internal(err.to_string()))?;
    let moved: Vec<EdgeId> = surplus[..target as usize].to_vec();
    let (a_low, a_up) = if d > 0 {
        (stars.a_low.clone(), stars.a_up[target as usize..].to_vec())
    } else {
        (stars.a_low[target as usize..].to_vec(), stars.a_up.clone())
    };
    Ok(Layout {
        rest_low: minus(&stars.low, &stars.a_low),
        rest_up: minus(&stars.up, &stars.a_up),
        a_low,
        a_up,
        corrections: chosen,
        correction_side: side,
        moved,
    })
}

/// Assembly of the blocks realizing the star of `v`.
pub fn plan_vertex(g: &LabeledGraph, f: &GoodFunction, v: VertexId, epsilon: f64) -> Result<VertexAssembly, PlanError> {
    let name = g.name(v).to_string();
    let height = f.value(v).ok_or_else(|| PlanError::InvalidInput(format!("vertex {name} has no value")))?;
    let stars = edge_stars(g, f, v).map_err(|e| PlanError::InvalidInput(e.to_string()))?;
    let mut b = Builder {
        g,
        vertex: name,
        interval: [height - epsilon, height + epsilon],
        blocks: vec![],
        merges: vec![],
        ports: vec![],
    };
    let d = stars.difference();

    match stars.extremum() {
        None if stars.degree() == 0 => Err(b.internal("isolated vertex")),
        Some(extremum) if stars.degree() == 1 => {
            let (e, open) = match extremum {
                Extremum::Min => (stars.up[0], End::Upper),
                Extremum::Max => (stars.low[0], End::Lower),
            };
            let label = g.label(e);
            let (kind, construction) =
                cap_kind(extremum, label).ok_or_else(|| b.internal(format!("leaf edge {e} has label {label}")))?;
            let idx = b.add(kind)?;
            b.port(e, open, ComponentRef::new(idx, open, 0), Style::Klein)?;
            Ok(b.finish(height, construction, vec![]))
        }
        Some(extremum) => {
            let (edges, odd, open) = match extremum {
                Extremum::Min => (&stars.up, &stars.a_up, End::Upper),
                Extremum::Max => (&stars.low, &stars.a_low, End::Lower),
            };
            if odd.len() % 2 != 0 {
                return Err(b.internal("odd number of odd-negative edges at an extremum"));
            }
            let half = odd.len() / 2;
            let rest = minus(edges, odd);
            let (rest_low, rest_up) = if odd.is_empty() { (vec![rest[0]], rest[1..].to_vec()) } else { (vec![], rest) };
            let layout = Layout::plain(odd[..half].to_vec(), odd[half..].to_vec(), rest_low, rest_up);
            build_channels(&mut b, &layout, Some(open))?;
            let open_classes: Vec<SurfaceClass> = edges.iter().map(|&e| SurfaceClass::from_label(g.label(e))).collect();
            let fold = instantiate_fold(extremum, b.interval, crate::surface::sorted(&open_classes))
                .map_err(|e| b.internal(e.to_string()))?;
            b.blocks.push(fold);
            let (construction, flags) = if odd.is_empty() {
                (Construction::FoldedSphereVertex, vec![])
            } else {
                (Construction::FoldedChannels, vec![PlanFlag::Part2Unverified])
            };
            Ok(b.finish(height, construction, flags))
        }
        None if d == 0 => {
            let layout = Layout::plain(
                stars.a_low.clone(),
                stars.a_up.clone(),
                minus(&stars.low, &stars.a_low),
                minus(&stars.up, &stars.a_up),
            );
            build_channels(&mut b, &layout, None)?;
            let construction =
                if layout.a_low.is_empty() { Construction::SphereVertex } else { Construction::BalancedChannels };
            Ok(b.finish(height, construction, vec![]))
        }
        None => {
            let layout = corrected_layout(&b, &stars, d)?;
            build_channels(&mut b, &layout, None)?;
            Ok(b.finish(height, Construction::CorrectedChannels, vec![]))
        }
    }
}
