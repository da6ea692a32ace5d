//! Testers for k-monotonicity of functions on the line `[n]`.
//!
//! * [`test_line_one_sided`]: non-adaptive, one-sided, `O(k/eps)` queries.
//! * [`test_line_two_sided`]: two-sided, with a query count that does not grow with
//!   `k`, built on support-size estimation for the interval-length distribution.

pub mod dual;
pub mod one_sided;
pub mod support;
pub mod two_sided;

pub use dual::{sample_df, Capped, DualAccess, LineDual};
pub use one_sided::{test_line_one_sided, OneSidedParams};
pub use support::{support_size_estimate, SupportEstimate};
pub use two_sided::{test_line_two_sided, TwoSidedParams};
