mod common;

use common::tight_star;
use reeb_forge::catalog::{instantiate, BlockKind, Direction};
use reeb_forge::fuzz::corpus;
use reeb_forge::graph::{EdgeId, LabeledGraph};
use reeb_forge::planner::{plan, ConstructionPlan};
use reeb_forge::realizability::check;
use reeb_forge::verifier::{audit_block, check_iso, sweep, validate_witness, verify, VerifyError};

fn plan_of(g: &LabeledGraph) -> ConstructionPlan {
    let f = g.good_function().unwrap();
    plan(g, &f, &check(g, &f)).unwrap()
}

fn path(labels: [i64; 2]) -> LabeledGraph {
    LabeledGraph::from_triples(&[("a", "b", labels[0]), ("b", "c", labels[1])]).with_named_heights(&[
        ("a", 0.0),
        ("b", 1.0),
        ("c", 2.0),
    ])
}

#[test]
fn single_edge_rebuilds_to_itself() {
    let g = LabeledGraph::from_triples(&[("a", "b", 0)]).with_named_heights(&[("a", 0.0), ("b", 1.0)]);
    let rebuilt = sweep(&plan_of(&g)).unwrap().graph;
    assert_eq!(rebuilt.vertex_count(), 2);
    assert_eq!(rebuilt.edge_count(), 1);
    assert_eq!(rebuilt.edges()[0].label, 0);
    assert_eq!(rebuilt.heights().unwrap(), &[0.0, 1.0]);
}

#[test]
fn tight_star_star_is_rebuilt() {
    let g = tight_star();
    let rebuilt = sweep(&plan_of(&g)).unwrap().graph;
    let v = rebuilt.vertex("v").unwrap();
    let mut labels: Vec<i64> = rebuilt.incident(v).map(|e| rebuilt.label(e)).collect();
    labels.sort();
    assert_eq!(labels, vec![-2, -1, -1, 0, 1]);
}

#[test]
fn deleting_a_klein_attachment_breaks_the_interface() {
    let g = path([0, -2]);
    let p = plan_of(&g);
    let sites = p.attachment_sites();
    assert_eq!(sites, vec![("b".to_string(), 1)]);
    let broken = p.without_attachment("b", 1).unwrap();
    match verify(&broken, &g, &g.good_function().unwrap()) {
        Err(VerifyError::InterfaceMismatch { vertex, edge, .. }) => {
            assert_eq!(vertex, "c");
            assert_eq!(edge, EdgeId(1));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn isomorphism_examples() {
    let g = path([0, 0]);
    let f = g.good_function().unwrap();
    let renamed = LabeledGraph::from_triples(&[("y", "z", 0), ("x", "y", 0)]).with_named_heights(&[
        ("z", 2.0),
        ("y", 1.0),
        ("x", 0.0),
    ]);
    let w = check_iso(&renamed, &g, &f).unwrap();
    validate_witness(&renamed, &g, &f, &w).unwrap();
    assert_ne!(w.edges, vec![EdgeId(0), EdgeId(1)]);

    let swapped = path([2, 0]);
    let g = path([0, 2]);
    assert!(check_iso(&swapped, &g, &g.good_function().unwrap()).is_err());
}

#[test]
fn audit_rederives_point_counts() {
    let ok = instantiate(BlockKind::NonorMerge { l: 3, direction: Direction::Up }, [0.0, 1.0]).unwrap();
    assert_eq!(ok.singular_points, 3);
    audit_block("v", 0, &ok).unwrap();

    let mut channel = instantiate(BlockKind::ProjChannel, [0.0, 1.0]).unwrap();
    channel.singular_points = 1;
    assert!(matches!(audit_block("v", 0, &channel), Err(VerifyError::CountMismatch { .. })));

    let mut attach = instantiate(BlockKind::KleinAttach { direction: Direction::Up }, [0.0, 1.0]).unwrap();
    attach.upper = vec![reeb_forge::SurfaceClass::TORUS];
    assert!(audit_block("v", 0, &attach).is_err());
}

#[test]
fn tampered_plans_fail() {
    let g = tight_star();
    let f = g.good_function().unwrap();
    let p = plan_of(&g);

    let mut missing = p.clone();
    missing.vertices.remove("c");
    assert!(matches!(sweep(&missing), Err(VerifyError::DanglingEdge { .. })));

    let mut wide = p.clone();
    wide.vertices.get_mut("v").unwrap().interval = [0.0, 2.0];
    assert!(matches!(sweep(&wide), Err(VerifyError::IntervalOverlap { .. })));

    let mut split = p.clone();
    split.vertices.get_mut("v").unwrap().merges.clear();
    assert!(matches!(verify(&split, &g, &f), Err(VerifyError::DanglingComponent { .. })));

    let mut schedule = p.clone();
    schedule.edges[2].at_lower.torus = 0;
    assert!(matches!(verify(&schedule, &g, &f), Err(VerifyError::ScheduleMismatch { .. })));

    let mut dropped_port = p.clone();
    dropped_port.vertices.get_mut("v").unwrap().ports.pop();
    assert!(verify(&dropped_port, &g, &f).is_err());
}

#[test]
fn every_single_mutation_is_caught() {
    let mut instances = 0;
    for (g, f) in corpus(600, 21) {
        if !check(&g, &f).accepted() {
            continue;
        }
        instances += 1;
        let p = plan(&g, &f, &check(&g, &f)).unwrap();
        verify(&p, &g, &f).unwrap();
        for e in g.edge_ids() {
            for label in -7..=7 {
                if label != g.label(e) {
                    assert!(verify(&p, &g.with_label(e, label), &f).is_err(), "label {label} on {e}");
                }
            }
        }
        for (vertex, block) in p.attachment_sites() {
            let broken = p.without_attachment(&vertex, block).unwrap();
            assert!(verify(&broken, &g, &f).is_err(), "attachment {block} at {vertex}");
        }
    }
    assert!(instances >= 50);
}

#[test]
fn unmerged_channels_split_the_vertex() {
    // Two channels and a sphere vertex at b: dropping the disjoint merges
    // leaves three Reeb vertices at one height.
    let g = LabeledGraph::from_triples(&[
        ("a", "b", -1),
        ("a", "b", -1),
        ("b", "c", -1),
        ("b", "c", -1),
        ("a", "b", 0),
        ("b", "c", 0),
    ])
    .with_named_heights(&[("a", 0.0), ("b", 1.0), ("c", 2.0)]);
    let f = g.good_function().unwrap();
    let mut p = plan_of(&g);
    verify(&p, &g, &f).unwrap();
    let b = p.vertices.get_mut("b").unwrap();
    assert_eq!(b.merges.len(), 2);
    b.merges.clear();
    let rebuilt = sweep(&p).unwrap().graph;
    assert_eq!(rebuilt.vertex_count(), 5);
    assert!(matches!(verify(&p, &g, &f), Err(VerifyError::NotIsomorphic(_))));
}
