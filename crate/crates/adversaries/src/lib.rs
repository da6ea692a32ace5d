//! Instance generators for k-monotonicity experiments.
//!
//! Every generator is deterministic in its parameters and seed and returns an
//! [`InstanceBundle`]: the truth table plus whatever distance information can be
//! computed exactly (or certified from below) at that size.

pub mod bundle;
pub mod cube;
pub mod grid;
pub mod line;
pub mod random;
pub mod registry;

pub use bundle::{InstanceBundle, InstanceMeta};
pub use cube::{anti_majority, anti_parity_bound, gen_anti_parity, gen_compose_gh, weight_bands};
pub use grid::{gen_band, gen_stripes};
pub use line::{evenly_cut, gen_gv_line, gv_table, staircase};
pub use random::{gen_noisy, gen_random_k_monotone, gen_random_k_monotone_blocks};
pub use registry::{generate, resolve_file, FAMILIES};
