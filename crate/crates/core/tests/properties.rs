mod common;

use proptest::prelude::*;

use common::reachable_sums;
use reeb_forge::fuzz::random_instance;
use reeb_forge::graph::EdgeId;
use reeb_forge::io::{parse_graph, parse_plan, serialize_graph, serialize_plan};
use reeb_forge::planner::{choose_correction_set, plan};
use reeb_forge::realizability::{check, Coverage};
use reeb_forge::surface::SurfaceClass;
use reeb_forge::verifier::verify;

fn class() -> impl Strategy<Value = SurfaceClass> {
    prop_oneof![
        (0u64..500).prop_map(|g| SurfaceClass::orientable(g).unwrap()),
        (1u64..500).prop_map(|k| SurfaceClass::non_orientable(k).unwrap()),
    ]
}

proptest! {
    #[test]
    fn connected_sum_laws(a in class(), b in class(), c in class()) {
        prop_assert_eq!(a.connected_sum(b), b.connected_sum(a));
        prop_assert_eq!(a.connected_sum(b).connected_sum(c), a.connected_sum(b.connected_sum(c)));
        prop_assert_eq!(a.connected_sum(SurfaceClass::SPHERE), a);
        prop_assert_eq!(a.connected_sum(b).euler_char(), a.euler_char() + b.euler_char() - 2);
        prop_assert_eq!(a.connected_sum(b).is_orientable(), a.is_orientable() && b.is_orientable());
    }

    #[test]
    fn klein_and_torus_agree_on_nonorientable(k in 1u64..200, n in 0u64..50) {
        let base = SurfaceClass::non_orientable(k).unwrap();
        prop_assert_eq!(base.attach_klein(n), base.attach_torus(n));
    }

    #[test]
    fn three_crosscaps_are_torus_plus_one(a in class()) {
        let n1 = SurfaceClass::PROJECTIVE_PLANE;
        prop_assert_eq!(
            a.connected_sum(n1).connected_sum(n1).connected_sum(n1),
            a.connected_sum(SurfaceClass::TORUS).connected_sum(n1)
        );
    }

    #[test]
    fn instances_round_trip(seed in any::<u64>()) {
        let (g, f) = random_instance(seed);
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back.graph, &g);
        prop_assert_eq!(serialize_graph(&back.graph), text);
        let report = check(&g, &f);
        if report.mt1.holds() {
            prop_assert!(report.mt2.holds());
        }
        if report.coverage != Coverage::Outside {
            let p = plan(&g, &f, &report).unwrap();
            prop_assert!(verify(&p, &g, &f).is_ok());
            let text = serialize_plan(&p);
            prop_assert_eq!(parse_plan(&text).unwrap(), p);
        }
    }

    #[test]
    fn corrections_are_exact(budgets in prop::collection::vec(1u64..5, 0..8), half in 1u64..20) {
        let candidates: Vec<(EdgeId, u64)> = budgets.iter().enumerate().map(|(i, b)| (EdgeId(i), 2 * b)).collect();
        let target = 2 * half;
        let feasible = reachable_sums(&candidates.iter().map(|c| c.1).collect::<Vec<_>>()).contains(&target);
        match choose_correction_set(target, &candidates) {
            Ok(chosen) => {
                prop_assert!(feasible);
                prop_assert_eq!(chosen.iter().map(|c| c.1).sum::<u64>(), target);
            }
            Err(_) => prop_assert!(!feasible),
        }
    }
}
