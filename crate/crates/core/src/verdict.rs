//! Tester outputs.

use serde::{Deserialize, Serialize};

/// Accept or reject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Accept,
    Reject,
}

/// The result of one tester run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    /// Queries charged to the input function.
    pub queries: u64,
    pub seed: u64,
    /// Violating chain (point indices, bottom to top) backing a one-sided rejection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    /// Short machine-readable reason, e.g. `"giveaways"` or `"query-cap"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn accept(queries: u64, seed: u64) -> Self {
        Verdict { decision: Decision::Accept, queries, seed, witness: None, reason: None }
    }

    pub fn reject(queries: u64, seed: u64) -> Self {
        Verdict { decision: Decision::Reject, queries, seed, witness: None, reason: None }
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn with_witness(mut self, chain: Vec<usize>) -> Self {
        self.witness = Some(chain);
        self
    }

    pub fn accepted(&self) -> bool {
        self.decision == Decision::Accept
    }

    pub fn rejected(&self) -> bool {
        self.decision == Decision::Reject
    }
}
