#![allow(dead_code)]

use std::collections::BTreeSet;

use reeb_forge::graph::{EdgeId, LabeledGraph};

/// Signed letter of a polygon word.
pub type Letter = (u32, bool);

/// Standard word of a class: `a b a^-1 b^-1 ...`, `a a ...`, or `a a^-1`.
pub fn standard_word(orientable: bool, genus: u64, first: u32) -> Vec<Letter> {
    let mut w = Vec::new();
    if orientable {
        if genus == 0 {
            return vec![(first, true), (first, false)];
        }
        for i in 0..genus as u32 {
            let (a, b) = (first + 2 * i, first + 2 * i + 1);
            w.extend([(a, true), (b, true), (a, false), (b, false)]);
        }
    } else {
        for i in 0..genus as u32 {
            w.extend([(first + i, true), (first + i, true)]);
        }
    }
    w
}

/// Orientability and Euler characteristic of the surface glued from one
/// polygon by the pairing of its edges.
pub fn classify_word(word: &[Letter]) -> (bool, i64) {
    let n = word.len();
    assert!(n >= 2 && n.is_multiple_of(2));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let ends = |i: usize| -> (usize, usize) {
        let (a, b) = (i, (i + 1) % n);
        if word[i].1 {
            (a, b)
        } else {
            (b, a)
        }
    };
    let letters: BTreeSet<u32> = word.iter().map(|l| l.0).collect();
    let mut orientable = true;
    for &letter in &letters {
        let occ: Vec<usize> = (0..n).filter(|&i| word[i].0 == letter).collect();
        assert_eq!(occ.len(), 2, "each letter appears twice");
        if word[occ[0]].1 == word[occ[1]].1 {
            orientable = false;
        }
        let (t0, h0) = ends(occ[0]);
        let (t1, h1) = ends(occ[1]);
        for (x, y) in [(t0, t1), (h0, h1)] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    let vertices = (0..n).filter(|&i| find(&mut parent, i) == i).count() as i64;
    (orientable, vertices - letters.len() as i64 + 1)
}

/// Every class with `|chi| <= bound`.
pub fn classes_with_chi(bound: i64) -> Vec<(bool, u64)> {
    let mut out = Vec::new();
    let mut g = 0;
    while 2 - 2 * g as i64 >= -bound {
        out.push((true, g));
        g += 1;
    }
    let mut k = 1;
    while 2 - k as i64 >= -bound {
        out.push((false, k));
        k += 1;
    }
    out
}

/// Every sum reachable by choosing, per candidate, 0 or an even amount in
/// `[2, budget]`.
pub fn reachable_sums(budgets: &[u64]) -> BTreeSet<u64> {
    let mut sums = BTreeSet::from([0u64]);
    for &b in budgets {
        let mut next = sums.clone();
        for &s in &sums {
            let mut take = 2;
            while take <= b {
                next.insert(s + take);
                take += 2;
            }
        }
        sums = next;
    }
    sums
}

/// Every choice vector, enumerated explicitly.
pub fn enumerate_choices(budgets: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &b in budgets {
        let mut next = Vec::new();
        for prefix in &out {
            let mut take = 0;
            while take <= b {
                let mut v = prefix.clone();
                v.push(take);
                next.push(v);
                take += 2;
            }
        }
        out = next;
    }
    out
}

/// A star with slack zero: `v` at 1 with ascending
/// labels -1, -1, 1 and descending labels -2, 0, and a leaf or a double
/// edge beyond every neighbour.
pub fn tight_star() -> LabeledGraph {
    LabeledGraph::from_triples(&[("v", "t", -1), ("v", "t", -1), ("v", "c", 1), ("b1", "v", -2), ("b2", "v", 0)])
        .with_named_heights(&[("v", 1.0), ("t", 2.0), ("c", 2.0), ("b1", 0.0), ("b2", 0.0)])
}

/// Ascending -1, -1 and descending 0 at `v`.
pub fn starved_star() -> LabeledGraph {
    LabeledGraph::from_triples(&[("v", "t", -1), ("v", "t", -1), ("b", "v", 0)]).with_named_heights(&[
        ("v", 1.0),
        ("t", 2.0),
        ("b", 0.0),
    ])
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn edge_ids(g: &LabeledGraph) -> Vec<EdgeId> {
    g.edge_ids().collect()
}
