//! Adaptive testing of 2-monotonicity on the square grid `[n]^2`.
//!
//! A 2-column-wise-monotone function with zero first and last rows is described by
//! two sequences of column changepoints, and it is 2-monotone exactly when both
//! (suitably resolved on empty columns) are non-increasing. The tester builds the
//! coarsened repair `g~` lazily ([`RingG`]), tests both sequences for monotonicity in
//! L1 distance from samples, and finally estimates the distance from `f` to `g~`.

pub mod changepoints;
pub mod coarse;
pub mod l1;
pub mod ring;
pub mod tester;

pub use changepoints::{extract_changepoints, is_two_column_wise_monotone, ColumnChangepoints, SequenceRepair};
pub use coarse::{build_tilde_g, Band, ColumnBlocks, TildeG};
pub use kmt_core::isotonic::{l1_isotonic_exact, Direction, IsotonicFit};
pub use l1::{l1_monotone_subtester, sampled_l1_distance, L1SubtesterParams};
pub use ring::{anchor_columns, RingG};
pub use tester::{run_grid2, test_grid2_2monotone, Grid2Params, Grid2Run};
