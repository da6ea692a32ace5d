//! Named testers with a common calling convention.

use kmt_core::{BoolFn, KmtError, Result, Verdict};
use kmt_cube::{test_cube_one_sided, CubeParams};
use kmt_grid::{test_grid2_2monotone, Grid2Params};
use kmt_highdim::{tolerant_test_agnostic, tolerant_test_full};
use kmt_line::{test_line_one_sided, test_line_two_sided, OneSidedParams, TwoSidedParams};
use serde::{Deserialize, Serialize};

/// Boolean testers reachable from the CLI and experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TesterId {
    /// One-sided non-adaptive line tester.
    LineOneSided,
    /// Two-sided line tester through support-size estimation.
    LineTwoSided,
    /// Adaptive 2-monotonicity tester on `[n]^2`.
    Grid2,
    /// One-sided hypercube tester with superqueries.
    Cube,
    /// Tolerant tester from block label estimates.
    HighdimFull,
    /// Tolerant tester from agnostic learning.
    HighdimAgnostic,
}

impl TesterId {
    pub const ALL: [TesterId; 6] = [
        TesterId::LineOneSided,
        TesterId::LineTwoSided,
        TesterId::Grid2,
        TesterId::Cube,
        TesterId::HighdimFull,
        TesterId::HighdimAgnostic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TesterId::LineOneSided => "line-one-sided",
            TesterId::LineTwoSided => "line-two-sided",
            TesterId::Grid2 => "grid2",
            TesterId::Cube => "cube",
            TesterId::HighdimFull => "highdim-full",
            TesterId::HighdimAgnostic => "highdim-agnostic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    /// Whether the tester takes `eps1 < eps2` rather than a single `eps`.
    pub fn tolerant(self) -> bool {
        matches!(self, TesterId::HighdimFull | TesterId::HighdimAgnostic)
    }

    /// Runs the tester on `f`.
    pub fn run(self, f: &dyn BoolFn, args: &TesterArgs, seed: u64) -> Result<Verdict> {
        let (eps1, eps2) = args.thresholds(self)?;
        let k = args.k;
        match self {
            TesterId::LineOneSided => test_line_one_sided(f, &OneSidedParams::new(k, eps2), seed),
            TesterId::LineTwoSided => {
                let mut p = TwoSidedParams::new(k, eps2);
                if args.no_delegation {
                    p = p.without_delegation();
                }
                test_line_two_sided(f, &p, seed)
            }
            TesterId::Grid2 => {
                if k != 2 {
                    return Err(KmtError::InvalidParameter(format!("grid2 tests k = 2 only, got k = {k}")));
                }
                test_grid2_2monotone(f, &Grid2Params::new(eps2), seed)
            }
            TesterId::Cube => test_cube_one_sided(f, &CubeParams::new(k, eps2), seed),
            TesterId::HighdimFull => tolerant_test_full(f, k, eps1, eps2, seed),
            TesterId::HighdimAgnostic => tolerant_test_agnostic(f, k, eps1, eps2, seed),
        }
    }
}

impl std::fmt::Display for TesterId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by every tester.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TesterArgs {
    pub k: usize,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub eps1: Option<f64>,
    #[serde(default)]
    pub eps2: Option<f64>,
    /// Keep the two-sided line tester from handing small `k` to the one-sided one.
    #[serde(default)]
    pub no_delegation: bool,
}

impl TesterArgs {
    pub fn new(k: usize, eps: f64) -> Self {
        TesterArgs { k, eps: Some(eps), eps1: None, eps2: None, no_delegation: false }
    }

    pub fn tolerant(k: usize, eps1: f64, eps2: f64) -> Self {
        TesterArgs { k, eps: None, eps1: Some(eps1), eps2: Some(eps2), no_delegation: false }
    }

    /// `(eps1, eps2)` as the tester sees them. A plain tester is the case `eps1 = 0`,
    /// `eps2 = eps`.
    pub fn thresholds(&self, tester: TesterId) -> Result<(f64, f64)> {
        if tester.tolerant() {
            match (self.eps1, self.eps2) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(KmtError::InvalidParameter(format!("{tester} needs --eps1 and --eps2"))),
            }
        } else {
            self.eps
                .or(self.eps2)
                .map(|e| (0.0, e))
                .ok_or_else(|| KmtError::InvalidParameter(format!("{tester} needs --eps")))
        }
    }
}
