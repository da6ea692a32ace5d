//! One-sided non-adaptive k-monotonicity testing on `{0,1}^d`.
//!
//! Almost all of the cube sits in a narrow band of weights around `d/2`. The tester
//! samples points from that band and, for each one, reads every band point below or
//! above it (a superquery). It rejects only when the points read contain a violating
//! chain, so k-monotone functions are always accepted.

pub mod tester;
pub mod window;

pub use tester::{superquery, superquery_size, test_cube_one_sided, CubeParams, Truncation, CUBE_DIM_LIMIT};
pub use window::{binomial, middle_window, MiddleWindow};
