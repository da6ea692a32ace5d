//! Tolerant testers for k-monotonicity on `[n]^d` whose cost is exponential in the
//! dimension, and the Fourier toolkit on `[r]^d` that supports the learning-based one.
//!
//! * [`full`]: block label estimates followed by an exact search over k-monotone block
//!   functions.
//! * [`agnostic`]: low-degree regression of the block labels, an error estimate, and an
//!   exact distance computation on the learned block function.
//! * [`fourier`]: orthonormal product bases, coefficients, influences.
//! * [`regression`]: the indicator-feature regression learner.
//! * [`enumerate`]: the k-monotone functions of a small block domain.

pub mod agnostic;
pub mod enumerate;
pub mod fourier;
pub mod full;
pub mod regression;

pub use agnostic::{run_agnostic, tolerant_test_agnostic, AgnosticParams, AgnosticRun};
pub use enumerate::{enumerate_k_monotone_block_functions, min_cost_k_monotone};
pub use fourier::{boolean_fourier, fourier_transform, influence, to_pm1, CoordinateBasis, FourierTable, Influences};
pub use full::{run_full, tolerant_test_full, BlockLabelDistribution, FullParams, FullRun};
pub use regression::{agnostic_learn_kkms, fit, LabelCounts, RegressionHypothesis, RegressionMethod};
