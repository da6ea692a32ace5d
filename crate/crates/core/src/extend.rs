//! Extending a k-monotone partial assignment to the whole domain.
//!
//! Points are completed one at a time, always choosing a minimal unassigned point
//! (the first unassigned index is minimal since index order extends the poset). A
//! value that keeps the assignment k-monotone always exists, so the greedy pass
//! never gets stuck.

use crate::chain::PartialChainSearch;
use crate::domain::Domain;
use crate::error::{KmtError, Result};
use crate::table::TruthTable;

/// Completes `partial` to a total k-monotone function that agrees with it where assigned.
pub fn extend_partial(domain: &Domain, partial: &[Option<bool>], k: usize) -> Result<TruthTable> {
    if partial.len() != domain.size() {
        return Err(KmtError::InvalidParameter(format!(
            "partial assignment has {} entries for {} points",
            partial.len(),
            domain.size()
        )));
    }
    if let Some(chain) = PartialChainSearch::find_violation(domain, partial, k) {
        return Err(KmtError::PreconditionViolated(format!(
            "assignment is not {k}-monotone on its support: violating chain {chain:?}"
        )));
    }
    let mut vals = partial.to_vec();
    for v in 0..domain.size() {
        if vals[v].is_some() {
            continue;
        }
        vals[v] = Some(false);
        if !PartialChainSearch::is_k_monotone(domain, &vals, k) {
            vals[v] = Some(true);
            if !PartialChainSearch::is_k_monotone(domain, &vals, k) {
                return Err(KmtError::ConstructionFailed(format!("no admissible value at point {v}")));
            }
        }
    }
    Ok(TruthTable::from_fn(domain.clone(), |i| vals[i] == Some(true)))
}
