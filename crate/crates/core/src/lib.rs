//! Core machinery for testing k-monotonicity of Boolean functions on grid posets.
//!
//! The crate provides the poset domains (`[n]`, `[n]^d`, `{0,1}^d` and rectangular
//! grids), bit-packed truth tables, query-counted oracles, the longest alternating
//! chain dynamic program, exact and certified distance oracles, the structural
//! procedures around the violation hypergraph (matchings and partial extension),
//! block coarsening, and exact isotonic regression in the L1 norm.

pub mod chain;
pub mod coarsen;
pub mod distance;
pub mod domain;
pub mod error;
pub mod extend;
pub mod flow;
pub mod io;
pub mod isotonic;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod rng;
pub mod table;
pub mod verdict;

pub use chain::{find_violation, is_k_monotone, is_violation_chain, longest_alternating_chain, ChainSearch, PartialChainSearch};
pub use distance::{exact_distance, exact_distance_bruteforce, exact_distance_line_dp, DistanceKind, DistanceValue};
pub use domain::{Domain, DomainKind};
pub use error::{KmtError, Result};
pub use oracle::{BoolFn, Oracle};
pub use table::TruthTable;
pub use verdict::{Decision, Verdict};
