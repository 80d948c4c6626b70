//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::time::{Duration, Instant};

use common::{classes_with_chi, classify_word, enumerate_choices, standard_word, starved_star, tight_star};
use reeb_forge::catalog::{catalog_entry, instantiate, instantiate_fold, BlockKind, Direction, FoldFiber};
use reeb_forge::cli::run;
use reeb_forge::fuzz::corpus;
use reeb_forge::graph::{EdgeId, Extremum, GoodFunction, LabeledGraph};
use reeb_forge::planner::{choose_correction_set, plan, CorrectionError};
use reeb_forge::realizability::{check, check_mt1, check_mt2, Mt2Condition};
use reeb_forge::surface::SurfaceClass;
use reeb_forge::verifier::{audit_block, audit_counts, check_iso, sweep, validate_witness, verify};

const CORPUS_SEED: u64 = 2024;

type Outcome = Result<String, String>;
type Criterion = (u32, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli_exit(args: &[&str]) -> i32 {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    run(std::iter::once("reeb-forge").chain(args.iter().copied()), &mut out, &mut err)
}

fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tight_star_fixture() -> Outcome {
    let g = tight_star();
    let f = g.good_function().unwrap();
    ensure(check_mt2(&g, &f).holds(), || "MT2 rejects the star".into())?;
    let report = check(&g, &f);
    let v = &report.per_vertex["v"];
    ensure(v.d_v == 2, || format!("D_v = {}", v.d_v))?;
    ensure(v.slack == Some(0), || format!("slack {:?}", v.slack))?;
    let code = cli_exit(&["check", &fixture_path("tight_star.json")]);
    ensure(code == 0, || format!("check exited {code}"))?;
    Ok("D_v = 2, slack 0, exit 0".into())
}

fn starved_star_fixture() -> Outcome {
    let g = starved_star();
    let f = g.good_function().unwrap();
    let verdict = check_mt2(&g, &f);
    let named = verdict.violations().iter().any(|x| x.vertex == "v" && x.condition == Mt2Condition::LowerBudget);
    ensure(named, || format!("violations {:?}", verdict.violations()))?;
    let code = cli_exit(&["check", &fixture_path("starved_star.json")]);
    ensure(code == 1, || format!("check exited {code}"))?;
    Ok("condition 2(a) at v, exit 1".into())
}

fn instances() -> Vec<(LabeledGraph, GoodFunction)> {
    corpus(1000, CORPUS_SEED).collect()
}

fn within_bounds(g: &LabeledGraph) -> bool {
    g.vertex_count() <= 8 && g.edge_count() <= 12 && g.edges().iter().all(|e| (-6..=4).contains(&e.label) && e.u != e.v)
}

fn inclusion() -> Outcome {
    let (mut mt1, mut exceptions) = (0, 0);
    for (g, f) in instances() {
        ensure(within_bounds(&g), || "instance outside the corpus bounds".into())?;
        if check_mt1(&g, &f).holds() {
            mt1 += 1;
            if !check_mt2(&g, &f).holds() {
                exceptions += 1;
            }
        }
    }
    ensure(exceptions == 0, || format!("{exceptions} exceptions"))?;
    ensure(mt1 > 0, || "no MT1 instance in the corpus".into())?;
    Ok(format!("{mt1} MT1-accepted instances, 0 exceptions"))
}

fn round_trip() -> Outcome {
    let mut accepted = 0;
    for (i, (g, f)) in instances().into_iter().enumerate() {
        let report = check(&g, &f);
        if !report.accepted() {
            continue;
        }
        accepted += 1;
        let fail = |e: String| format!("instance {i}: {e}");
        let p = plan(&g, &f, &report).map_err(|e| fail(e.to_string()))?;
        verify(&p, &g, &f).map_err(|e| fail(e.to_string()))?;
        let rebuilt = sweep(&p).map_err(|e| fail(e.to_string()))?.graph;
        let w = check_iso(&rebuilt, &g, &f).map_err(|e| fail(e.to_string()))?;
        validate_witness(&rebuilt, &g, &f, &w).map_err(fail)?;
        let heights = rebuilt.heights().unwrap();
        for v in 0..g.vertex_count() {
            let input = f.value(reeb_forge::VertexId(v)).unwrap();
            ensure(heights[w.vertices[v].0] == input, || fail(format!("height of vertex {v} moved")))?;
        }
        for e in g.edge_ids() {
            ensure(rebuilt.label(w.edges[e.0]) == g.label(e), || fail(format!("label of {e} differs")))?;
        }
    }
    Ok(format!("{accepted} accepted instances verified"))
}

fn mutation_kill() -> Outcome {
    let (mut instances, mut mutants) = (0, 0u64);
    for (i, (g, f)) in corpus(5000, CORPUS_SEED + 1).enumerate() {
        if instances == 100 {
            break;
        }
        let report = check(&g, &f);
        if !report.accepted() {
            continue;
        }
        instances += 1;
        let p = plan(&g, &f, &report).map_err(|e| e.to_string())?;
        verify(&p, &g, &f).map_err(|e| format!("instance {i}: {e}"))?;
        for e in g.edge_ids() {
            for label in (-8..=6).chain([-31, 17]) {
                if label == g.label(e) {
                    continue;
                }
                mutants += 1;
                ensure(verify(&p, &g.with_label(e, label), &f).is_err(), || {
                    format!("instance {i}: label {label} on {e} survives")
                })?;
            }
        }
        for (vertex, block) in p.attachment_sites() {
            mutants += 1;
            let broken = p.without_attachment(&vertex, block).ok_or("attachment site vanished")?;
            ensure(verify(&broken, &g, &f).is_err(), || {
                format!("instance {i}: deleting {block} at {vertex} survives")
            })?;
        }
    }
    ensure(instances == 100, || format!("only {instances} accepted instances"))?;
    Ok(format!("{mutants} mutants over {instances} instances, 100% killed"))
}

fn class(orientable: bool, genus: u64) -> SurfaceClass {
    if orientable {
        SurfaceClass::orientable(genus).unwrap()
    } else {
        SurfaceClass::non_orientable(genus).unwrap()
    }
}

fn surface_oracle() -> Outcome {
    let classes: Vec<SurfaceClass> = classes_with_chi(20).into_iter().map(|(o, g)| class(o, g)).collect();
    let mut pairs = 0;
    for &(oa, ga) in &classes_with_chi(20) {
        for &(ob, gb) in &classes_with_chi(20) {
            let mut word = standard_word(oa, ga, 0);
            word.extend(standard_word(ob, gb, 1000));
            let (orientable, chi) = classify_word(&word);
            let (a, b) = (class(oa, ga), class(ob, gb));
            let sum = a.connected_sum(b);
            ensure(sum.is_orientable() == orientable && sum.euler_char() == chi as i128, || format!("{a} # {b}"))?;
            ensure(sum.euler_char() == a.euler_char() + b.euler_char() - 2, || format!("chi of {a} # {b}"))?;
            ensure(sum == b.connected_sum(a), || format!("{a} # {b} not commutative"))?;
            pairs += 1;
        }
    }
    for &a in &classes {
        ensure(a.connected_sum(SurfaceClass::SPHERE) == a, || format!("{a} # S0"))?;
        for &b in &classes {
            for &c in &classes {
                ensure(a.connected_sum(b).connected_sum(c) == a.connected_sum(b.connected_sum(c)), || {
                    format!("({a} # {b}) # {c}")
                })?;
            }
        }
    }
    Ok(format!("{} classes, {pairs} pairs", classes.len()))
}

fn leaf_plan_audit(label: i64) -> Result<(u64, u64, Vec<SurfaceClass>), String> {
    let g = LabeledGraph::from_triples(&[("a", "b", label)]).with_named_heights(&[("a", 0.0), ("b", 1.0)]);
    let f = g.good_function().unwrap();
    let p = plan(&g, &f, &check(&g, &f)).map_err(|e| e.to_string())?;
    let counts = audit_counts(&p).map_err(|e| e.to_string())?;
    let boundary = p.vertices["a"].blocks.iter().flat_map(|b| b.upper.clone()).collect();
    Ok((counts.morse_points, counts.non_morse_blocks, boundary))
}

fn catalog_audit() -> Outcome {
    let mut checked = 0;
    let interval = [0.0, 1.0];
    let mut expect = |kind: BlockKind, points: u32| -> Result<(), String> {
        let block = instantiate(kind, interval).map_err(|e| e.to_string())?;
        audit_block("v", 0, &block).map_err(|e| e.to_string())?;
        let entry = catalog_entry(&kind).map_err(|e| e.to_string())?;
        ensure(block.singular_points == points && entry.singular_points == points, || {
            format!("{} has {} points, expected {points}", kind.name(), block.singular_points)
        })?;
        checked += 1;
        Ok(())
    };
    for l in 1..=6u32 {
        for direction in [Direction::Up, Direction::Down] {
            expect(BlockKind::NonorMerge { l, direction }, l)?;
        }
    }
    expect(BlockKind::ProjChannel, 2)?;
    for direction in [Direction::Up, Direction::Down] {
        expect(BlockKind::KleinAttach { direction }, 1)?;
        expect(BlockKind::TorusAttach { direction }, 1)?;
    }
    for extremum in [Extremum::Min, Extremum::Max] {
        expect(BlockKind::HeightCap { extremum }, 1)?;
    }
    for l0 in 1..=5u32 {
        let target = SurfaceClass::non_orientable(2 + 2 * u64::from(l0)).unwrap();
        for extremum in [Extremum::Min, Extremum::Max] {
            let kind = BlockKind::FoldCap { extremum, fiber: FoldFiber::NonOrientable { l0 } };
            let block = instantiate(kind, interval).map_err(|e| e.to_string())?;
            audit_block("v", 0, &block).map_err(|e| e.to_string())?;
            let open: Vec<SurfaceClass> = block.lower.iter().chain(&block.upper).copied().collect();
            ensure(open == [target], || format!("FoldCap(l0 = {l0}) boundary {open:?}"))?;
            checked += 1;
        }
        let (points, non_morse, boundary) = leaf_plan_audit(-(2 + 2 * i64::from(l0)))?;
        ensure(points == 0 && non_morse == 2 && boundary == [target], || {
            format!("planned FoldCap(l0 = {l0}): {points} points, {non_morse} non-Morse, {boundary:?}")
        })?;
    }
    let fold = instantiate_fold(Extremum::Max, interval, vec![SurfaceClass::PROJECTIVE_PLANE; 2]);
    ensure(fold.is_ok(), || "fold wrapper rejected".into())?;
    let (points, non_morse, boundary) = leaf_plan_audit(0)?;
    ensure(points == 2 && non_morse == 0 && boundary == [SurfaceClass::SPHERE], || {
        format!("planned height caps: {points} points, {non_morse} non-Morse")
    })?;
    Ok(format!("{checked} catalog blocks, 0 mismatches"))
}

fn correction_enumeration() -> Outcome {
    let mut lists = 0;
    let mut cases = 0;
    for len in 0..=6u32 {
        for code in 0..3u64.pow(len) {
            let budgets: Vec<u64> = (0..len).map(|i| 2 * (code / 3u64.pow(i) % 3 + 1)).collect();
            let candidates: Vec<(EdgeId, u64)> = budgets.iter().enumerate().map(|(i, &b)| (EdgeId(i), b)).collect();
            let choices = enumerate_choices(&budgets);
            let max = budgets.iter().sum::<u64>();
            for target in (2..=max + 4).step_by(2) {
                let feasible = choices.iter().any(|c| c.iter().sum::<u64>() == target);
                match choose_correction_set(target, &candidates) {
                    Ok(chosen) => {
                        ensure(feasible, || format!("{budgets:?} D = {target}: infeasible target accepted"))?;
                        let mut used = std::collections::BTreeSet::new();
                        for &(e, amount) in &chosen {
                            let legal = used.insert(e) && amount >= 2 && amount % 2 == 0 && amount <= budgets[e.0];
                            ensure(legal, || format!("{budgets:?} D = {target}: illegal part {amount} on {e}"))?;
                        }
                        let total: u64 = chosen.iter().map(|c| c.1).sum();
                        ensure(total == target, || format!("{budgets:?} D = {target}: sums to {total}"))?;
                    }
                    Err(CorrectionError::Infeasible { .. }) => {
                        ensure(!feasible, || format!("{budgets:?} D = {target}: feasible target refused"))?;
                    }
                    Err(e) => return Err(format!("{budgets:?} D = {target}: {e}")),
                }
                cases += 1;
            }
            lists += 1;
        }
    }
    Ok(format!("{lists} lists, {cases} targets, 0 discrepancies"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, tight_star_fixture, Duration::from_secs(1)),
        (2, starved_star_fixture, Duration::from_secs(1)),
        (3, inclusion, Duration::from_secs(10)),
        (4, round_trip, Duration::from_secs(60)),
        (5, mutation_kill, Duration::from_secs(120)),
        (6, surface_oracle, Duration::from_secs(5)),
        (7, catalog_audit, Duration::from_secs(1)),
        (8, correction_enumeration, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (n, criterion, limit) in criteria {
        let start = Instant::now();
        let outcome = criterion();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed < limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; too slow")),
            Err(detail) => ("FAIL", detail),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n}: {status} ({detail}; {:.3} s, limit {} s)", elapsed.as_secs_f64(), limit.as_secs());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
