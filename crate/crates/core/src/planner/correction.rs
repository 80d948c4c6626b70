use thiserror::Error;

use crate::graph::EdgeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrectionError {
    #[error("target {0} must be positive and even")]
    BadTarget(u64),
    #[error("candidate {edge} has budget {budget}, expected positive and even")]
    BadCandidate { edge: EdgeId, budget: u64 },
    #[error("budget {available} cannot cover {target}")]
    Infeasible { target: u64, available: u64 },
}

/// Picks edges and even amounts `r''(e) <= r'(e)` summing exactly to
/// `target`.
///
/// Greedy over the candidates by descending budget, ties by edge id; each
/// pick takes as much of the remaining target as its budget allows.
pub fn choose_correction_set(target: u64, candidates: &[(EdgeId, u64)]) -> Result<Vec<(EdgeId, u64)>, CorrectionError> {
    if target == 0 || !target.is_multiple_of(2) {
        return Err(CorrectionError::BadTarget(target));
    }
    if let Some((edge, budget)) = candidates.iter().find(|(_, b)| *b == 0 || b % 2 != 0) {
        return Err(CorrectionError::BadCandidate { edge: *edge, budget: *budget });
    }
    let available = candidates.iter().map(|(_, b)| *b).fold(0u64, u64::saturating_add);
    if available < target {
        return Err(CorrectionError::Infeasible { target, available });
    }
    let mut order = candidates.to_vec();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut remaining = target;
    let mut picked = Vec::new();
    for (edge, budget) in order {
        if remaining == 0 {
            break;
        }
        let take = budget.min(remaining);
        picked.push((edge, take));
        remaining -= take;
    }
    Ok(picked)
}
