//! Low-degree polynomial regression over indicator features, thresholded at 1/2.
//!
//! The features on `[m_1] x ... x [m_d]` are the products `prod_{i in S} 1{x_i = v_i}`
//! with `|S| <= t` and every `v_i >= 1`. They form a basis of the span of all products
//! of at most `t` indicators `1{x_i = j}`, since `1{x_i = 0}` is the constant minus the
//! other indicators of coordinate `i`.
//!
//! The reference fit minimizes `sum |p(x_j) - y_j|` by linear programming. Samples are
//! grouped by point first: a point seen with `n_0` zeros and `n_1` ones contributes
//! `n_1 |p(x) - 1| + n_0 |p(x)|`. When `t >= d` the features span every function of
//! the grid, the program separates by point and its optimum is the weighted median of
//! the labels at each point, which is what gets returned without calling the solver.

use kmt_core::{Domain, KmtError, Result, TruthTable};
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

/// Largest feature count the linear program is built for.
pub const LP_FEATURE_LIMIT: u128 = 2048;

/// Largest grid the learner accepts when the features span every function.
pub const FULL_SPAN_LIMIT: usize = 1 << 16;

/// How the polynomial is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionMethod {
    /// Least absolute deviations by linear programming.
    L1,
    /// Least squares. Faster, but not the fit the analysis is about.
    LeastSquares,
}

impl RegressionMethod {
    /// Tag written next to results produced by this method.
    pub fn label(self) -> &'static str {
        match self {
            RegressionMethod::L1 => "l1-lp",
            RegressionMethod::LeastSquares => "least-squares (non-conforming)",
        }
    }
}

/// One feature: the coordinates in `S` with their required values, sorted by axis.
pub type Feature = Vec<(usize, usize)>;

/// Number of features of degree at most `t` on a grid with side lengths `dims`.
pub fn feature_count(dims: &[usize], t: usize) -> u128 {
    // poly[s] = sum over |S| = s of prod_{i in S} (m_i - 1)
    let mut poly = vec![0u128; dims.len() + 1];
    poly[0] = 1;
    for &m in dims {
        for s in (1..poly.len()).rev() {
            poly[s] += poly[s - 1] * (m as u128 - 1);
        }
    }
    poly.iter().take(t + 1).sum()
}

/// All features of degree at most `t`.
pub fn features(dims: &[usize], t: usize) -> Vec<Feature> {
    let mut out: Vec<Feature> = vec![Vec::new()];
    for (axis, &m) in dims.iter().enumerate() {
        let current = out.len();
        for i in 0..current {
            if out[i].len() >= t {
                continue;
            }
            for v in 1..m {
                let mut f = out[i].clone();
                f.push((axis, v));
                out.push(f);
            }
        }
    }
    out
}

fn active(domain: &Domain, feature: &Feature, x: usize) -> bool {
    feature.iter().all(|&(axis, v)| domain.coord(x, axis) == v)
}

/// Label counts `(n_0, n_1)` per point of the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCounts {
    pub domain: Domain,
    pub counts: Vec<[u64; 2]>,
}

impl LabelCounts {
    pub fn new(domain: &Domain) -> Self {
        LabelCounts { domain: domain.clone(), counts: vec![[0, 0]; domain.size()] }
    }

    pub fn from_samples(domain: &Domain, samples: &[(usize, bool)]) -> Self {
        let mut c = Self::new(domain);
        for &(x, y) in samples {
            c.add(x, y);
        }
        c
    }

    pub fn add(&mut self, x: usize, y: bool) {
        self.counts[x][y as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|c| c[0] + c[1]).sum()
    }

    /// `sum_x n_1 |p(x) - 1| + n_0 |p(x)|`.
    pub fn l1_objective(&self, p: &[f64]) -> f64 {
        self.counts.iter().zip(p).map(|(c, &v)| c[1] as f64 * (v - 1.0).abs() + c[0] as f64 * v.abs()).sum()
    }
}

/// A fitted polynomial and its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionHypothesis {
    pub domain: Domain,
    pub degree: usize,
    pub method: RegressionMethod,
    pub features: Vec<Feature>,
    pub coefficients: Vec<f64>,
    /// `p` at every point of the grid.
    pub values: Vec<f64>,
}

impl RegressionHypothesis {
    fn from_coefficients(domain: &Domain, degree: usize, method: RegressionMethod, features: Vec<Feature>, coefficients: Vec<f64>) -> Self {
        let values = (0..domain.size())
            .map(|x| features.iter().zip(&coefficients).filter(|(f, _)| active(domain, f, x)).map(|(_, c)| c).sum())
            .collect();
        RegressionHypothesis { domain: domain.clone(), degree, method, features, coefficients, values }
    }

    /// Full-span fit given by its values; the coefficients follow by inclusion–exclusion
    /// over the nonzero coordinates of each feature's anchor point.
    fn from_values(domain: &Domain, degree: usize, method: RegressionMethod, values: Vec<f64>) -> Self {
        let feats = features(domain.dims(), degree);
        let coefficients = feats
            .iter()
            .map(|f| {
                let s = f.len();
                (0u32..1 << s)
                    .map(|sub| {
                        let mut coords = vec![0usize; domain.d()];
                        for (bit, &(axis, v)) in f.iter().enumerate() {
                            if sub >> bit & 1 == 1 {
                                coords[axis] = v;
                            }
                        }
                        let sign = if (s - sub.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
                        sign * values[domain.encode(&coords)]
                    })
                    .sum()
            })
            .collect();
        RegressionHypothesis { domain: domain.clone(), degree, method, features: feats, coefficients, values }
    }

    /// `p(x)` evaluated from the coefficients.
    pub fn eval(&self, x: usize) -> f64 {
        self.features
            .iter()
            .zip(&self.coefficients)
            .filter(|(f, _)| active(&self.domain, f, x))
            .map(|(_, c)| c)
            .sum()
    }

    /// `h(x) = 1{p(x) >= 1/2}`.
    pub fn predict(&self, x: usize) -> bool {
        self.values[x] >= 0.5
    }

    /// `h` as a table.
    pub fn to_table(&self) -> TruthTable {
        TruthTable::from_fn(self.domain.clone(), |x| self.predict(x))
    }
}

/// Solves the grouped least-absolute-deviation program over the given features.
pub fn l1_regression_lp(counts: &LabelCounts, feats: &[Feature]) -> Result<Vec<f64>> {
    let dom = &counts.domain;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let coef: Vec<_> = feats.iter().map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for (x, c) in counts.counts.iter().enumerate() {
        if c[0] + c[1] == 0 {
            continue;
        }
        let p: Vec<_> = feats.iter().zip(&coef).filter(|(f, _)| active(dom, f, x)).map(|(_, &v)| v).collect();
        for (label, target) in [(1usize, 1.0), (0, 0.0)] {
            if c[label] == 0 {
                continue;
            }
            let e = lp.add_var(c[label] as f64, (0.0, f64::INFINITY));
            let plus: Vec<_> = std::iter::once((e, 1.0)).chain(p.iter().map(|&v| (v, 1.0))).collect();
            let minus: Vec<_> = std::iter::once((e, 1.0)).chain(p.iter().map(|&v| (v, -1.0))).collect();
            lp.add_constraint(plus, ComparisonOp::Ge, target);
            lp.add_constraint(minus, ComparisonOp::Ge, -target);
        }
    }
    let sol = lp.solve().map_err(|e| KmtError::ConstructionFailed(format!("regression program: {e}")))?;
    Ok(coef.iter().map(|&v| *sol.var_value(v)).collect())
}

/// Weighted least squares over the given features by the normal equations.
fn least_squares(counts: &LabelCounts, feats: &[Feature]) -> Vec<f64> {
    let dom = &counts.domain;
    let q = feats.len();
    let mut a = vec![vec![0.0; q + 1]; q];
    for (x, c) in counts.counts.iter().enumerate() {
        let w = (c[0] + c[1]) as f64;
        if w == 0.0 {
            continue;
        }
        let on: Vec<usize> = (0..q).filter(|&i| active(dom, &feats[i], x)).collect();
        for &i in &on {
            for &j in &on {
                a[i][j] += w;
            }
            a[i][q] += c[1] as f64;
        }
    }
    // A small ridge keeps the system solvable when some points are never sampled.
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += 1e-9;
    }
    for col in 0..q {
        let piv = (col..q).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        for row in col + 1..q {
            let factor = a[row][col] / d;
            if factor != 0.0 {
                for c in col..=q {
                    a[row][c] -= factor * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; q];
    for i in (0..q).rev() {
        let s: f64 = (i + 1..q).map(|j| a[i][j] * x[j]).sum();
        x[i] = (a[i][q] - s) / a[i][i];
    }
    x
}

/// Fits a degree-`degree` polynomial to labelled points of `domain` and thresholds it.
///
/// `draw` is called `samples` times and must return a point index with its label.
pub fn agnostic_learn_kkms(
    domain: &Domain,
    draw: &mut dyn FnMut() -> (usize, bool),
    degree: usize,
    samples: usize,
    method: RegressionMethod,
) -> Result<RegressionHypothesis> {
    let mut counts = LabelCounts::new(domain);
    for _ in 0..samples {
        let (x, y) = draw();
        counts.add(x, y);
    }
    fit(&counts, degree, method)
}

/// [`agnostic_learn_kkms`] on samples already grouped by point.
pub fn fit(counts: &LabelCounts, degree: usize, method: RegressionMethod) -> Result<RegressionHypothesis> {
    let dom = &counts.domain;
    let full_span = degree >= dom.dims().iter().filter(|&&m| m > 1).count();
    if full_span {
        if dom.size() > FULL_SPAN_LIMIT {
            return Err(KmtError::budget("regression grid", dom.size(), FULL_SPAN_LIMIT));
        }
        let values = counts
            .counts
            .iter()
            .map(|c| match method {
                RegressionMethod::L1 => (c[1] > c[0]) as u8 as f64,
                RegressionMethod::LeastSquares if c[0] + c[1] == 0 => 0.0,
                RegressionMethod::LeastSquares => c[1] as f64 / (c[0] + c[1]) as f64,
            })
            .collect();
        return Ok(RegressionHypothesis::from_values(dom, degree.min(dom.d()), method, values));
    }
    let count = feature_count(dom.dims(), degree);
    if count > LP_FEATURE_LIMIT {
        return Err(KmtError::BudgetExceeded { what: "regression features", requested: count, limit: LP_FEATURE_LIMIT });
    }
    let feats = features(dom.dims(), degree);
    let coefficients = match method {
        RegressionMethod::L1 => l1_regression_lp(counts, &feats)?,
        RegressionMethod::LeastSquares => least_squares(counts, &feats),
    };
    Ok(RegressionHypothesis::from_coefficients(dom, degree, method, feats, coefficients))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmt_core::rng::seeded;
    use rand::Rng;

    #[test]
    fn feature_counts() {
        assert_eq!(feature_count(&[4, 4], 0), 1);
        assert_eq!(feature_count(&[4, 4], 1), 7);
        assert_eq!(feature_count(&[4, 4], 2), 16);
        assert_eq!(feature_count(&[3, 3, 3], 2), 1 + 6 + 12);
        for (dims, t) in [(vec![4usize, 4], 1usize), (vec![3, 2, 5], 2), (vec![2, 2, 2, 2], 3)] {
            let f = features(&dims, t);
            assert_eq!(f.len() as u128, feature_count(&dims, t));
            assert!(f.iter().all(|g| g.len() <= t));
        }
    }

    #[test]
    fn full_degree_features_form_a_basis() {
        let dom = Domain::grid(3, 2);
        let values: Vec<f64> = (0..9).map(|x| (x as f64 * 0.37).sin()).collect();
        let h = RegressionHypothesis::from_values(&dom, 2, RegressionMethod::L1, values.clone());
        for x in 0..9 {
            assert!((h.eval(x) - values[x]).abs() < 1e-12);
        }
    }

    #[test]
    fn realizable_threshold_is_learned_exactly() {
        let dom = Domain::grid(2, 2);
        for (axis, up) in [(0, true), (1, true), (1, false)] {
            let target = |x: usize| (dom.coord(x, axis) == 1) == up;
            let mut rng = seeded(1);
            let mut draw = || {
                let x = rng.random_range(0..4);
                (x, target(x))
            };
            for method in [RegressionMethod::L1, RegressionMethod::LeastSquares] {
                let h = agnostic_learn_kkms(&dom, &mut draw, 1, 400, method).unwrap();
                assert_eq!(h.degree, 1);
                assert_eq!(h.features.len(), 3);
                assert!((0..4).all(|x| h.predict(x) == target(x)), "{method:?}");
            }
        }
    }

    #[test]
    fn closed_form_attains_the_program_optimum() {
        let mut rng = seeded(8);
        for dom in [Domain::grid(3, 2), Domain::cube(3), Domain::line(5)] {
            for _ in 0..5 {
                let mut counts = LabelCounts::new(&dom);
                for x in 0..dom.size() {
                    counts.counts[x] = [rng.random_range(0..6), rng.random_range(0..6)];
                }
                let closed = fit(&counts, dom.d(), RegressionMethod::L1).unwrap();
                let feats = features(dom.dims(), dom.d());
                let lp = RegressionHypothesis::from_coefficients(
                    &dom,
                    dom.d(),
                    RegressionMethod::L1,
                    feats.clone(),
                    l1_regression_lp(&counts, &feats).unwrap(),
                );
                let (a, b) = (counts.l1_objective(&closed.values), counts.l1_objective(&lp.values));
                assert!((a - b).abs() < 1e-6, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn program_beats_every_grid_candidate_at_degree_one() {
        // Degree-1 polynomials on [3]^2 are a + b(x) + c(y); no candidate with
        // coefficients on a coarse grid may do better than the program.
        let dom = Domain::grid(3, 2);
        let mut rng = seeded(4);
        let mut counts = LabelCounts::new(&dom);
        for x in 0..9 {
            counts.counts[x] = [rng.random_range(0..5), rng.random_range(0..5)];
        }
        let h = fit(&counts, 1, RegressionMethod::L1).unwrap();
        let best = counts.l1_objective(&h.values);
        let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let mut coef = [0.0; 5];
        let mut idx = [0usize; 5];
        loop {
            for i in 0..5 {
                coef[i] = grid[idx[i]];
            }
            let feats = features(dom.dims(), 1);
            let cand = RegressionHypothesis::from_coefficients(&dom, 1, RegressionMethod::L1, feats, coef.to_vec());
            assert!(best <= counts.l1_objective(&cand.values) + 1e-9);
            let mut i = 0;
            while i < 5 && idx[i] == 4 {
                idx[i] = 0;
                i += 1;
            }
            if i == 5 {
                break;
            }
            idx[i] += 1;
        }
    }

    #[test]
    fn feature_budget() {
        let counts = LabelCounts::new(&Domain::grid(40, 3));
        assert!(matches!(fit(&counts, 2, RegressionMethod::L1), Err(KmtError::BudgetExceeded { .. })));
        let big = LabelCounts::new(&Domain::grid(300, 2));
        assert!(fit(&big, 2, RegressionMethod::L1).is_err());
    }
}
