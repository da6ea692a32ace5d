//! L1 distance to monotonicity for functions `f: [n]^d -> [0,1]`.
//!
//! A real function is turned into a Boolean one on `[n]^d x [m]` by rounding its
//! values up to multiples of `1/m` and reading off its threshold sets. For rounded
//! functions the L1 distance to the monotone functions equals the Hamming distance of
//! the lift to the monotone Boolean functions, so the tolerant Boolean testers answer
//! the L1 question.

pub mod lift;
pub mod real;
pub mod tester;

pub use lift::{l1_equals_hamming_check, l1_hamming_sides, threshold_lift, ThresholdLift};
pub use real::{l1_distance_to_monotone, round_m, RealFunction};
pub use tester::{rounding_parameter, run_l1, tolerant_l1_test_monotone, Engine, L1Run};
