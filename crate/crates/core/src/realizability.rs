//! Label conditions under which the constructions apply.
//!
//! `mt1` is the label-wise criterion (every label non-negative or even and
//! negative). `mt2` is the vertex-wise criterion on the signed count `D_v`
//! of odd-negative edges and on the negative-label budget `r'` at
//! non-extremum vertices. Failing both is not a proof of non-realizability.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge_stars, EdgeId, EdgeStars, Extremum, GoodFunction, LabeledGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "violations", rename_all = "snake_case")]
pub enum Verdict<V> {
    Holds,
    Violated(Vec<V>),
}

impl<V> Verdict<V> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    fn from_violations(v: Vec<V>) -> Self {
        if v.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Violated(v)
        }
    }

    pub fn violations(&self) -> &[V] {
        match self {
            Verdict::Holds => &[],
            Verdict::Violated(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mt1Violation {
    pub edge: EdgeId,
    pub label: i64,
}

impl fmt::Display for Mt1Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} has odd negative label {}", self.edge, self.label)
    }
}

/// Which vertex condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mt2Condition {
    /// `D_v` is odd.
    #[serde(rename = "1")]
    OddDifference,
    /// `D_v > 0` exceeds the budget of the descending negative edges.
    #[serde(rename = "2(a)")]
    LowerBudget,
    /// `D_v < 0` and `|D_v|` exceeds the budget of the ascending negative edges.
    #[serde(rename = "2(b)")]
    UpperBudget,
}

impl fmt::Display for Mt2Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mt2Condition::OddDifference => "1",
            Mt2Condition::LowerBudget => "2(a)",
            Mt2Condition::UpperBudget => "2(b)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mt2Violation {
    pub vertex: String,
    pub condition: Mt2Condition,
    pub d_v: i64,
    /// Budget that was available, for the inequality conditions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

impl fmt::Display for Mt2Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MT2 condition {} violated at {} (D_v = {}", self.condition, self.vertex, self.d_v)?;
        if let Some(b) = self.budget {
            write!(f, ", budget {b}")?;
        }
        write!(f, ")")
    }
}

/// Per-vertex bookkeeping behind the verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    pub d_v: i64,
    pub e_up: usize,
    pub e_low: usize,
    pub a_up: usize,
    pub a_low: usize,
    pub b_up: usize,
    pub b_low: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremum: Option<Extremum>,
    /// `budget - |D_v|` where the inequality applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Mt1,
    Mt2,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizabilityReport {
    pub coverage: Coverage,
    pub mt1: Verdict<Mt1Violation>,
    pub mt2: Verdict<Mt2Violation>,
    pub per_vertex: BTreeMap<String, VertexRecord>,
}

impl RealizabilityReport {
    pub fn accepted(&self) -> bool {
        self.coverage != Coverage::Outside
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealizabilityError {
    #[error("r' is only defined for negative labels, got {0}")]
    NonNegativeLabel(i64),
}

/// Greatest even number not exceeding `|r|`, for negative `r`.
pub fn rg_prime(r: i64) -> Result<u64, RealizabilityError> {
    if r >= 0 {
        return Err(RealizabilityError::NonNegativeLabel(r));
    }
    let a = r.unsigned_abs();
    Ok(a - a % 2)
}

fn mt1_label_ok(label: i64) -> bool {
    label >= 0 || label % 2 == 0
}

pub fn check_mt1(g: &LabeledGraph, _f: &GoodFunction) -> Verdict<Mt1Violation> {
    Verdict::from_violations(
        g.edge_ids()
            .filter(|e| !mt1_label_ok(g.label(*e)))
            .map(|edge| Mt1Violation { edge, label: g.label(edge) })
            .collect(),
    )
}

/// `#A_up,v - #A_low,v`.
pub fn compute_dv(g: &LabeledGraph, f: &GoodFunction, v: VertexId) -> Result<i64, crate::graph::GraphError> {
    Ok(edge_stars(g, f, v)?.difference())
}

fn budget(g: &LabeledGraph, edges: &[EdgeId]) -> u64 {
    edges.iter().map(|e| rg_prime(g.label(*e)).expect("budget edges are negative")).fold(0u64, u64::saturating_add)
}

/// Evaluates the vertex conditions at one vertex. Returns the bookkeeping
/// record and the failed condition, if any.
fn evaluate_vertex(g: &LabeledGraph, stars: &EdgeStars) -> (VertexRecord, Option<(Mt2Condition, Option<u64>)>) {
    let d_v = stars.difference();
    let extremum = stars.extremum();
    let mut record = VertexRecord {
        d_v,
        e_up: stars.up.len(),
        e_low: stars.low.len(),
        a_up: stars.a_up.len(),
        a_low: stars.a_low.len(),
        b_up: stars.b_up.len(),
        b_low: stars.b_low.len(),
        extremum,
        slack: None,
    };
    if d_v % 2 != 0 {
        return (record, Some((Mt2Condition::OddDifference, None)));
    }
    if extremum.is_some() || d_v == 0 {
        return (record, None);
    }
    let (available, condition) = if d_v > 0 {
        (budget(g, &stars.b_low), Mt2Condition::LowerBudget)
    } else {
        (budget(g, &stars.b_up), Mt2Condition::UpperBudget)
    };
    let slack = available as i128 - d_v.unsigned_abs() as i128;
    record.slack = Some(slack.clamp(i64::MIN as i128, i64::MAX as i128) as i64);
    if slack < 0 {
        (record, Some((condition, Some(available))))
    } else {
        (record, None)
    }
}

pub fn check_mt2(g: &LabeledGraph, f: &GoodFunction) -> Verdict<Mt2Violation> {
    check(g, f).mt2
}

/// Full report. Inputs must already pass graph and function validation.
pub fn check(g: &LabeledGraph, f: &GoodFunction) -> RealizabilityReport {
    let mt1 = check_mt1(g, f);
    let mut per_vertex = BTreeMap::new();
    let mut violations = Vec::new();
    for v in g.vertices() {
        let stars = edge_stars(g, f, v).expect("vertex of the graph");
        let (record, failure) = evaluate_vertex(g, &stars);
        if let Some((condition, budget)) = failure {
            violations.push(Mt2Violation { vertex: g.name(v).to_string(), condition, d_v: record.d_v, budget });
        }
        per_vertex.insert(g.name(v).to_string(), record);
    }
    let mt2 = Verdict::from_violations(violations);
    let coverage = if mt1.holds() {
        Coverage::Mt1
    } else if mt2.holds() {
        Coverage::Mt2
    } else {
        Coverage::Outside
    };
    RealizabilityReport { coverage, mt1, mt2, per_vertex }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight_star() -> (LabeledGraph, GoodFunction) {
        let g = LabeledGraph::from_triples(&[
            ("v", "t", -1),
            ("v", "t", -1),
            ("v", "c", 1),
            ("b1", "v", -2),
            ("b2", "v", 0),
        ])
        .with_named_heights(&[("v", 1.0), ("t", 2.0), ("c", 2.0), ("b1", 0.0), ("b2", 0.0)]);
        let f = g.good_function().unwrap();
        (g, f)
    }

    fn starved_star() -> (LabeledGraph, GoodFunction) {
        let g = LabeledGraph::from_triples(&[("v", "t", -1), ("v", "t", -1), ("b", "v", 0)]).with_named_heights(&[
            ("v", 1.0),
            ("t", 2.0),
            ("b", 0.0),
        ]);
        let f = g.good_function().unwrap();
        (g, f)
    }

    #[test]
    fn mt1_label_classes() {
        let g =
            LabeledGraph::from_triples(&[("a", "b", 0), ("b", "c", 2), ("c", "d", -2), ("d", "e", -4), ("e", "f", 5)]);
        let f = g.good_function().unwrap();
        assert!(check_mt1(&g, &f).holds());

        let g = g.with_label(EdgeId(2), -3);
        assert_eq!(check_mt1(&g, &f), Verdict::Violated(vec![Mt1Violation { edge: EdgeId(2), label: -3 }]));

        let single = LabeledGraph::from_triples(&[("a", "b", 0)]);
        assert!(check_mt1(&single, &single.good_function().unwrap()).holds());
    }

    #[test]
    fn rg_prime_values() {
        assert_eq!(rg_prime(-2), Ok(2));
        assert_eq!(rg_prime(-1), Ok(0));
        assert_eq!(rg_prime(-7), Ok(6));
        assert_eq!(rg_prime(0), Err(RealizabilityError::NonNegativeLabel(0)));
        assert_eq!(rg_prime(i64::MIN), Ok(1 << 63));
    }

    #[test]
    fn tight_star_difference_and_acceptance() {
        let (g, f) = tight_star();
        let v = g.vertex("v").unwrap();
        assert_eq!(compute_dv(&g, &f, v), Ok(2));
        let report = check(&g, &f);
        assert_eq!(report.coverage, Coverage::Mt2);
        assert_eq!(report.per_vertex["v"].slack, Some(0));
        // the top vertex is a maximum collecting both odd edges
        assert_eq!(report.per_vertex["t"].d_v, -2);
        assert_eq!(report.per_vertex["t"].extremum, Some(Extremum::Max));
    }

    #[test]
    fn starved_star_fails_lower_budget() {
        let (g, f) = starved_star();
        assert_eq!(compute_dv(&g, &f, g.vertex("v").unwrap()), Ok(2));
        let verdict = check_mt2(&g, &f);
        let v = verdict.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].vertex, "v");
        assert_eq!(v[0].condition, Mt2Condition::LowerBudget);
        assert_eq!(v[0].budget, Some(0));
        assert_eq!(v[0].to_string(), "MT2 condition 2(a) violated at v (D_v = 2, budget 0)");
    }

    #[test]
    fn odd_leaf_fails_parity() {
        let g = LabeledGraph::from_triples(&[("a", "b", -1)]);
        let f = GoodFunction::from_values(&[0.0, 1.0]);
        assert_eq!(compute_dv(&g, &f, VertexId(0)), Ok(1));
        assert_eq!(compute_dv(&g, &f, VertexId(1)), Ok(-1));
        let v = check_mt2(&g, &f);
        assert_eq!(v.violations().len(), 2);
        assert!(v.violations().iter().all(|x| x.condition == Mt2Condition::OddDifference));
        assert_eq!(check(&g, &f).coverage, Coverage::Outside);
    }

    #[test]
    fn no_odd_labels_means_zero_difference() {
        let g = LabeledGraph::from_triples(&[("a", "b", -2), ("b", "c", 4)]);
        let f = g.good_function().unwrap();
        for v in g.vertices() {
            assert_eq!(compute_dv(&g, &f, v), Ok(0));
        }
    }

    #[test]
    fn upper_budget_mirror() {
        // two odd edges arriving from below, nothing negative above
        let g = LabeledGraph::from_triples(&[("b", "v", -1), ("b", "v", -1), ("v", "t", 0)]).with_named_heights(&[
            ("b", 0.0),
            ("v", 1.0),
            ("t", 2.0),
        ]);
        let f = g.good_function().unwrap();
        let v = check_mt2(&g, &f);
        assert_eq!(v.violations()[0].condition, Mt2Condition::UpperBudget);
        assert_eq!(v.violations()[0].d_v, -2);

        let g = g.with_label(EdgeId(2), -4);
        assert!(check_mt2(&g, &f).holds());
    }
}
