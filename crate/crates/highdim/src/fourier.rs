//! Orthonormal product bases on `[r]^d`, Fourier coefficients and influences.
//!
//! Inner products are taken under the uniform measure, `<g, h> = E[g(x) h(x)]`. The
//! per-coordinate basis comes from Gram–Schmidt on `1, x, x^2, ...` over
//! `{0, ..., r-1}`, each function scaled to unit norm and signed so that it is
//! positive at 0. For `r = 2` this gives `{1, 1 - 2x}`. Boolean values are mapped to
//! `±1` by `b -> 1 - 2b`.

use kmt_core::{BoolFn, Domain, KmtError, Result, TruthTable};
use serde::{Deserialize, Serialize};

/// Largest domain for which the Fourier routines read every point.
pub const FOURIER_LIMIT: usize = 1 << 20;

/// An orthonormal basis `phi_0 = 1, phi_1, ..., phi_{r-1}` of functions on `{0, ..., r-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateBasis {
    pub r: usize,
    /// `values[j][x] = phi_j(x)`.
    pub values: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64
}

impl CoordinateBasis {
    /// Gram–Schmidt on the monomials, with a second orthogonalization pass.
    pub fn gram_schmidt(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(KmtError::InvalidParameter("a coordinate needs r >= 1 values".into()));
        }
        let mut values: Vec<Vec<f64>> = Vec::with_capacity(r);
        for j in 0..r {
            let mut v: Vec<f64> = (0..r).map(|x| (x as f64).powi(j as i32)).collect();
            for _ in 0..2 {
                for u in &values {
                    let c = dot(&v, u);
                    v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
                }
            }
            let norm = dot(&v, &v).sqrt();
            let sign = if v[0] < 0.0 { -1.0 } else { 1.0 };
            v.iter_mut().for_each(|a| *a *= sign / norm);
            values.push(v);
        }
        Ok(CoordinateBasis { r, values })
    }

    /// `<phi_a, phi_b>` under the uniform measure.
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        dot(&self.values[a], &self.values[b])
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.r {
            for b in 0..self.r {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.inner(a, b) - target).abs());
            }
        }
        worst
    }
}

/// `b -> 1 - 2b` applied to a whole table.
pub fn to_pm1(f: &TruthTable) -> Vec<f64> {
    (0..f.len()).map(|x| if f.get(x) { -1.0 } else { 1.0 }).collect()
}

fn uniform_side(domain: &Domain) -> Result<usize> {
    if !domain.is_uniform() {
        return Err(KmtError::PreconditionViolated(format!("Fourier routines need [r]^d, got {domain}")));
    }
    if domain.size() > FOURIER_LIMIT {
        return Err(KmtError::budget("Fourier transform", domain.size(), FOURIER_LIMIT));
    }
    Ok(domain.dims()[0])
}

/// Applies the matrix `m[j][x]` along every axis of a table on `[r]^d`.
fn along_axes(domain: &Domain, values: &[f64], m: &[Vec<f64>]) -> Vec<f64> {
    let r = m.len();
    let mut cur = values.to_vec();
    let mut line = vec![0.0; r];
    for axis in 0..domain.d() {
        let stride = domain.strides()[axis];
        for base in 0..domain.size() {
            if domain.coord(base, axis) != 0 {
                continue;
            }
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = (0..r).map(|x| m[j][x] * cur[base + x * stride]).sum();
            }
            for (j, &v) in line.iter().enumerate() {
                cur[base + j * stride] = v;
            }
        }
    }
    cur
}

/// Coefficients of a real function on `[r]^d` in the product basis `phi_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    pub domain: Domain,
    pub basis: CoordinateBasis,
    /// Indexed like the points of `domain`: the entry at `alpha` is `f^(alpha)`.
    pub coeffs: Vec<f64>,
}

impl FourierTable {
    /// `f^(alpha)`.
    pub fn coefficient(&self, alpha: &[usize]) -> f64 {
        self.coeffs[self.domain.encode(alpha)]
    }

    /// Number of nonzero entries of the multi-index stored at `idx`.
    pub fn degree(&self, idx: usize) -> usize {
        (0..self.domain.d()).filter(|&i| self.domain.coord(idx, i) != 0).count()
    }

    /// `sum f^(alpha)^2`.
    pub fn squared_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `sum |alpha| f^(alpha)^2`.
    pub fn spectral_influence(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, c)| self.degree(i) as f64 * c * c).sum()
    }

    /// `sum over |alpha| > t of f^(alpha)^2`.
    pub fn tail_above(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.degree(i) as f64 > t)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// Values on `[r]^d` of the polynomial keeping the terms of degree at most `t`.
    pub fn truncate(&self, t: usize) -> Vec<f64> {
        let kept: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if self.degree(i) <= t { c } else { 0.0 })
            .collect();
        let r = self.basis.r;
        let transpose: Vec<Vec<f64>> = (0..r).map(|x| (0..r).map(|j| self.basis.values[j][x]).collect()).collect();
        along_axes(&self.domain, &kept, &transpose)
    }
}

/// Exact coefficients `f^(alpha) = <f, phi_alpha>` of a real function on `[r]^d`.
pub fn fourier_transform(domain: &Domain, values: &[f64], basis: &CoordinateBasis) -> Result<FourierTable> {
    let r = uniform_side(domain)?;
    if basis.r != r || values.len() != domain.size() {
        return Err(KmtError::PreconditionViolated("basis or value table does not fit the domain".into()));
    }
    let scaled: Vec<Vec<f64>> = basis.values.iter().map(|row| row.iter().map(|v| v / r as f64).collect()).collect();
    Ok(FourierTable { domain: domain.clone(), basis: basis.clone(), coeffs: along_axes(domain, values, &scaled) })
}

/// Transform of the `±1` version of a Boolean function in the Gram–Schmidt basis.
pub fn boolean_fourier(f: &dyn BoolFn) -> Result<FourierTable> {
    let dom = f.domain();
    let r = uniform_side(dom)?;
    let t = TruthTable::tabulate(f);
    fourier_transform(dom, &to_pm1(&t), &CoordinateBasis::gram_schmidt(r)?)
}

/// Exact influences of a Boolean function on `[r]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Influences {
    /// `Inf_i = 2 Pr[f(x) != f(x^(i))]` with `x_i` redrawn uniformly.
    pub per_coordinate: Vec<f64>,
    pub total: f64,
}

/// Influences by direct expectation over every pair `(x, x'_i)`.
pub fn influence(f: &dyn BoolFn) -> Result<Influences> {
    let dom = f.domain();
    let r = uniform_side(dom)?;
    let t = TruthTable::tabulate(f);
    let pairs = (dom.size() * r) as f64;
    let per_coordinate: Vec<f64> = (0..dom.d())
        .map(|axis| {
            let stride = dom.strides()[axis];
            let mut differ = 0usize;
            for x in 0..dom.size() {
                let base = x - dom.coord(x, axis) * stride;
                differ += (0..r).filter(|&v| t.get(base + v * stride) != t.get(x)).count();
            }
            2.0 * differ as f64 / pairs
        })
        .collect();
    let total = per_coordinate.iter().sum();
    Ok(Influences { per_coordinate, total })
}
