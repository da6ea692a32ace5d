//! Functions `[n]^d -> [0,1]` with exact rational values.
//!
//! Distances are normalized by the domain size: the L1 distance between `f` and `g`
//! is `(1/N) sum |f(x) - g(x)|`.

use std::str::FromStr;

use kmt_core::distance::exact_distance;
use kmt_core::flow::FLOW_LIMIT;
use kmt_core::io::RealFunctionFile;
use kmt_core::isotonic::{l1_isotonic_exact, Direction};
use kmt_core::{Domain, KmtError, Result};
use num_integer::Integer;
use num_rational::Rational64;

use crate::lift::ThresholdLift;

/// A real function on a grid with values in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunction {
    domain: Domain,
    values: Vec<Rational64>,
}

fn zero() -> Rational64 {
    Rational64::from_integer(0)
}

fn one() -> Rational64 {
    Rational64::from_integer(1)
}

impl RealFunction {
    /// Full table in point-index order.
    pub fn new(domain: Domain, values: Vec<Rational64>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(KmtError::InvalidParameter(format!(
                "{} values for a domain of {} points",
                values.len(),
                domain.size()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v < zero() || **v > one()) {
            return Err(KmtError::InvalidParameter(format!("value {v} at point {i} is outside [0,1]")));
        }
        Ok(RealFunction { domain, values })
    }

    /// Tabulates a generator.
    pub fn from_fn(domain: Domain, f: impl FnMut(usize) -> Rational64) -> Result<Self> {
        let values = (0..domain.size()).map(f).collect();
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn value(&self, idx: usize) -> Rational64 {
        self.values[idx]
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    /// `ceil(m f(x))`, the numerator of the rounded value over `m`.
    pub(crate) fn rounded_numerator(&self, idx: usize, m: usize) -> i64 {
        let v = self.values[idx];
        Integer::div_ceil(&(v.numer() * m as i64), v.denom())
    }

    /// Least common multiple of the denominators: the smallest `m` with `m f` integral.
    pub fn resolution(&self) -> i64 {
        self.values.iter().fold(1i64, |acc, v| acc.lcm(v.denom()))
    }

    /// Whether every value is a multiple of `1/m`.
    pub fn is_on_grid(&self, m: usize) -> bool {
        self.values.iter().all(|v| (v * Rational64::from_integer(m as i64)).is_integer())
    }

    /// Whether `x <= y` implies `f(x) <= f(y)`.
    pub fn is_monotone(&self) -> bool {
        (0..self.domain.size()).all(|x| self.domain.lower_covers(x).all(|y| self.values[y] <= self.values[x]))
    }

    pub fn from_file(file: &RealFunctionFile) -> Result<Self> {
        let domain = file.domain.to_domain()?;
        let values = file
            .values
            .iter()
            .map(|s| Rational64::from_str(s.trim()).map_err(|e| KmtError::Parse(format!("value `{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, values)
    }

    pub fn to_file(&self) -> RealFunctionFile {
        RealFunctionFile { domain: self.domain.spec(), values: self.values.iter().map(|v| v.to_string()).collect() }
    }

    /// Reads the JSON file format `{"domain": ..., "values": ["p/q", ...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let file: RealFunctionFile =
            serde_json::from_str(text).map_err(|e| KmtError::Parse(format!("real function file: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("real function files always serialize")
    }
}

/// `x -> ceil(m f(x)) / m`. Values land in `R_m = {1/m, ..., 1}`, except that 0 stays 0.
pub fn round_m(f: &RealFunction, m: usize) -> Result<RealFunction> {
    if m == 0 {
        return Err(KmtError::InvalidParameter("rounding needs m >= 1".into()));
    }
    let values = (0..f.domain.size())
        .map(|x| Rational64::new(f.rounded_numerator(x, m), m as i64))
        .collect();
    Ok(RealFunction { domain: f.domain.clone(), values })
}

/// Exact L1 distance from `f` to the monotone functions `[n]^d -> [0,1]`.
///
/// On a line this is isotonic median regression. On other grids `f` is lifted at its
/// own resolution `m` and the Hamming distance of the lift to monotonicity is computed
/// by a minimum cut on `N m` points.
pub fn l1_distance_to_monotone(f: &RealFunction) -> Result<Rational64> {
    if f.domain.is_line() {
        return Ok(l1_isotonic_exact(&f.values, Direction::NonDecreasing).distance);
    }
    let m = f.resolution();
    let points = (f.domain.size() as u128) * m as u128;
    if points > FLOW_LIMIT as u128 {
        return Err(KmtError::BudgetExceeded { what: "lifted L1 distance", requested: points, limit: FLOW_LIMIT as u128 });
    }
    let lift = ThresholdLift::new(f, m as usize)?;
    let dist = exact_distance(&lift, 1)?;
    Ok(Rational64::new(dist.num as i64, dist.den as i64))
}
