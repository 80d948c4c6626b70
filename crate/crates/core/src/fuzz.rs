//! Seeded random instances and the plan/verify round trip over them.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{Edge, GoodFunction, LabeledGraph, VertexId};
use crate::planner::{plan, PlanError};
use crate::realizability::{check, Coverage};
use crate::verifier::verify;

pub const MAX_VERTICES: usize = 8;
pub const MAX_EDGES: usize = 12;
pub const LABEL_RANGE: (i64, i64) = (-6, 4);

/// Seed of instance `index` in the run seeded by `seed`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random connected loop-free multigraph with values: 2 to 8 vertices, up
/// to 12 edges. Values are a permutation, small integers, or left to the
/// synthesizer.
pub fn random_instance(seed: u64) -> (LabeledGraph, GoodFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=MAX_VERTICES);
    let m = rng.gen_range(n - 1..=MAX_EDGES);
    let mut pairs = Vec::with_capacity(m);
    for i in 1..n {
        pairs.push((rng.gen_range(0..i), i));
    }
    while pairs.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n - 1);
        let b = if b >= a { b + 1 } else { b };
        pairs.push((a, b));
    }
    let edges: Vec<Edge> = pairs
        .into_iter()
        .map(|(a, b)| Edge { u: VertexId(a), v: VertexId(b), label: rng.gen_range(LABEL_RANGE.0..=LABEL_RANGE.1) })
        .collect();
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let graph = LabeledGraph::new(names, edges).expect("generated graph is well formed");

    let heights = match rng.gen_range(0..3) {
        0 => Some(permutation(&mut rng, n)),
        1 => (0..20)
            .map(|_| (0..n).map(|_| f64::from(rng.gen_range(0..4u8))).collect::<Vec<f64>>())
            .find(|h| graph.edges().iter().all(|e| h[e.u.0] != h[e.v.0]))
            .or_else(|| Some(permutation(&mut rng, n))),
        _ => None,
    };
    let graph = graph.with_heights(heights);
    let f = graph.good_function().expect("generated graph has no loops");
    (graph, f)
}

fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut h: Vec<f64> = (0..n).map(|i| i as f64).collect();
    h.shuffle(rng);
    h
}

/// Corpus of `count` instances.
pub fn corpus(count: u64, seed: u64) -> impl Iterator<Item = (LabeledGraph, GoodFunction)> {
    (0..count).map(move |i| random_instance(instance_seed(seed, i)))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub instances: u64,
    pub mt1: u64,
    pub mt2: u64,
    pub rejected: u64,
    pub verified: u64,
    pub failures: Vec<String>,
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "instances: {}, mt1: {}, mt2 only: {}, rejected: {}, verified: {}, failures: {}",
            self.instances,
            self.mt1,
            self.mt2,
            self.rejected,
            self.verified,
            self.failures.len()
        )?;
        for failure in &self.failures {
            writeln!(f, "  {failure}")?;
        }
        Ok(())
    }
}

/// Checks, plans and verifies every instance of the corpus.
pub fn run_fuzz(count: u64, seed: u64) -> FuzzSummary {
    let mut summary = FuzzSummary { instances: count, ..Default::default() };
    for i in 0..count {
        let (g, f) = random_instance(instance_seed(seed, i));
        let report = check(&g, &f);
        match report.coverage {
            Coverage::Mt1 => summary.mt1 += 1,
            Coverage::Mt2 => summary.mt2 += 1,
            Coverage::Outside => {
                summary.rejected += 1;
                continue;
            }
        }
        if report.mt1.holds() && !report.mt2.holds() {
            summary.failures.push(format!("instance {i}: label criterion holds but vertex criterion fails"));
        }
        let outcome = plan(&g, &f, &report)
            .map_err(|e: PlanError| e.to_string())
            .and_then(|p| verify(&p, &g, &f).map_err(|e| e.to_string()));
        match outcome {
            Ok(_) => summary.verified += 1,
            Err(e) => summary.failures.push(format!("instance {i}: {e}")),
        }
    }
    summary
}
