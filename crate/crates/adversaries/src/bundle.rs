//! Instances with distance metadata.

use kmt_core::chain::FULL_READ_LIMIT;
use kmt_core::distance::BRUTE_FORCE_LIMIT;
use kmt_core::matching::greedy_violation_matching;
use kmt_core::{exact_distance, is_k_monotone, DistanceValue, Result, TruthTable};
use serde::Serialize;
use serde_json::{Map, Value};

/// Largest non-line domain for which metadata runs min-cut or greedy matching.
pub const META_LIMIT: usize = 1 << 16;

/// Distance information about an instance, relative to k-monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceMeta {
    pub k: usize,
    pub k_monotone: Option<bool>,
    /// Exact normalized distance when an exact oracle fits the size.
    pub exact_distance: Option<DistanceValue>,
    /// Greedy-matching lower bound when no exact value was computed.
    pub lower_bound: Option<DistanceValue>,
    /// Family-specific facts (block counts, band sizes, ...).
    pub extra: Map<String, Value>,
}

impl InstanceMeta {
    /// Recomputes all metadata from the table.
    pub fn compute(table: &TruthTable, k: usize) -> Result<Self> {
        let dom = table.domain();
        let n = dom.size();
        let k_monotone = if n <= FULL_READ_LIMIT { Some(is_k_monotone(table, k)?) } else { None };
        let exact_ok = dom.is_line() || n <= BRUTE_FORCE_LIMIT || (k == 1 && n <= META_LIMIT);
        let (exact_distance, lower_bound) = if k_monotone == Some(true) {
            (Some(DistanceValue::exact(0, n as u64)), None)
        } else if exact_ok {
            (Some(exact_distance(table, k)?), None)
        } else if n <= META_LIMIT {
            (None, Some(greedy_violation_matching(table, k)?.lower_bound))
        } else {
            (None, None)
        };
        Ok(InstanceMeta { k, k_monotone, exact_distance, lower_bound, extra: Map::new() })
    }

    /// Best certified lower bound on the distance: the exact value if known.
    pub fn certified_distance(&self) -> Option<f64> {
        self.exact_distance.as_ref().or(self.lower_bound.as_ref()).map(|d| d.as_f64())
    }
}

/// A generated function with its provenance and metadata.
#[derive(Debug, Clone)]
pub struct InstanceBundle {
    pub table: TruthTable,
    pub family: String,
    pub params: Value,
    pub seed: u64,
    pub meta: InstanceMeta,
}

impl InstanceBundle {
    /// Bundles a table, computing metadata for `k`.
    pub fn new(table: TruthTable, family: &str, params: Value, seed: u64, k: usize) -> Result<Self> {
        let meta = InstanceMeta::compute(&table, k)?;
        Ok(InstanceBundle { table, family: family.to_string(), params, seed, meta })
    }

    /// Adds a family-specific metadata entry.
    pub fn with_extra(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.extra.insert(key.to_string(), value.into());
        self
    }
}
