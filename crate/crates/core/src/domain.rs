//! Grid posets and their mixed-radix point encoding.
//!
//! Every domain is a product of chains `[n_1] x ... x [n_d]` ordered coordinatewise.
//! Points are stored as indices in `[0, N)` where coordinate 0 is the least
//! significant digit. Index order is a linear extension of the partial order, so
//! scanning indices upward visits every point after all points below it.

use serde::{Deserialize, Serialize};

use crate::error::{KmtError, Result};

/// Shape family of a domain, kept for display and file round-tripping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    /// The chain `[n]`.
    Line,
    /// The hypergrid `[n]^d`.
    Grid,
    /// The hypercube `{0,1}^d`.
    Cube,
    /// A product of chains with per-axis lengths.
    Rect,
}

/// A finite grid poset with its point encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    kind: DomainKind,
    dims: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl Domain {
    fn build(kind: DomainKind, dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty(), "a domain needs at least one axis");
        assert!(dims.iter().all(|&n| n >= 1), "axis lengths must be positive");
        let mut strides = Vec::with_capacity(dims.len());
        let mut size: usize = 1;
        for &n in &dims {
            strides.push(size);
            size = size.checked_mul(n).expect("domain size overflows usize");
        }
        Domain { kind, dims, strides, size }
    }

    /// The line `[n]`.
    pub fn line(n: usize) -> Self {
        Self::build(DomainKind::Line, vec![n])
    }

    /// The hypergrid `[n]^d`; `d = 1` yields a line.
    pub fn grid(n: usize, d: usize) -> Self {
        if d == 1 {
            return Self::line(n);
        }
        Self::build(DomainKind::Grid, vec![n; d])
    }

    /// The hypercube `{0,1}^d`.
    pub fn cube(d: usize) -> Self {
        Self::build(DomainKind::Cube, vec![2; d])
    }

    /// The product of chains with the given axis lengths.
    pub fn rect(dims: Vec<usize>) -> Self {
        if dims.len() == 1 {
            return Self::line(dims[0]);
        }
        let kind = if dims.windows(2).all(|w| w[0] == w[1]) {
            if dims[0] == 2 {
                DomainKind::Cube
            } else {
                DomainKind::Grid
            }
        } else {
            DomainKind::Rect
        };
        Self::build(kind, dims)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Number of axes.
    pub fn d(&self) -> usize {
        self.dims.len()
    }

    /// Side length of a uniform domain (the first axis length for rectangles).
    pub fn n(&self) -> usize {
        self.dims[0]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of points `N`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_line(&self) -> bool {
        self.dims.len() == 1
    }

    /// Whether all axes share one length.
    pub fn is_uniform(&self) -> bool {
        self.kind != DomainKind::Rect
    }

    /// Mixed-radix index of a coordinate vector.
    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dims.len());
        coords
            .iter()
            .zip(&self.strides)
            .zip(&self.dims)
            .map(|((&c, &s), &n)| {
                debug_assert!(c < n);
                c * s
            })
            .sum()
    }

    /// Checked variant of [`Domain::encode`].
    pub fn try_encode(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.dims.len() || coords.iter().zip(&self.dims).any(|(&c, &n)| c >= n) {
            return Err(KmtError::InvalidParameter(format!(
                "point {coords:?} is outside the domain {:?}",
                self.dims
            )));
        }
        Ok(self.encode(coords))
    }

    /// Coordinate vector of an index.
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        debug_assert!(idx < self.size);
        self.dims
            .iter()
            .map(|&n| {
                let c = idx % n;
                idx /= n;
                c
            })
            .collect()
    }

    /// A single coordinate of an index.
    #[inline]
    pub fn coord(&self, idx: usize, axis: usize) -> usize {
        (idx / self.strides[axis]) % self.dims[axis]
    }

    /// Coordinatewise comparison `a <= b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if a > b {
            return false;
        }
        (0..self.dims.len()).all(|axis| self.coord(a, axis) <= self.coord(b, axis))
    }

    /// Strict comparison `a < b` in the poset.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Whether `a` and `b` are comparable.
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Lower covers of `idx` in the Hasse diagram (one per axis with a nonzero coordinate).
    pub fn lower_covers(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dims.len()).filter_map(move |axis| {
            if self.coord(idx, axis) > 0 {
                Some(idx - self.strides[axis])
            } else {
                None
            }
        })
    }

    /// Upper covers of `idx` in the Hasse diagram.
    pub fn upper_covers(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dims.len()).filter_map(move |axis| {
            if self.coord(idx, axis) + 1 < self.dims[axis] {
                Some(idx + self.strides[axis])
            } else {
                None
            }
        })
    }

    /// Sum of coordinates (the Hamming weight on the cube).
    pub fn rank(&self, idx: usize) -> usize {
        (0..self.dims.len()).map(|axis| self.coord(idx, axis)).sum()
    }

    /// Length of a longest chain, `1 + sum (n_i - 1)`.
    pub fn height(&self) -> usize {
        1 + self.dims.iter().map(|n| n - 1).sum::<usize>()
    }

    /// Serializable header describing the domain.
    pub fn spec(&self) -> DomainSpec {
        match self.kind {
            DomainKind::Line => DomainSpec { kind: DomainKind::Line, n: Some(self.dims[0]), d: Some(1), dims: None },
            DomainKind::Grid => DomainSpec { kind: DomainKind::Grid, n: Some(self.dims[0]), d: Some(self.d()), dims: None },
            DomainKind::Cube => DomainSpec { kind: DomainKind::Cube, n: Some(2), d: Some(self.d()), dims: None },
            DomainKind::Rect => DomainSpec { kind: DomainKind::Rect, n: None, d: None, dims: Some(self.dims.clone()) },
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            DomainKind::Line => write!(f, "[{}]", self.dims[0]),
            DomainKind::Grid => write!(f, "[{}]^{}", self.dims[0], self.d()),
            DomainKind::Cube => write!(f, "{{0,1}}^{}", self.d()),
            DomainKind::Rect => {
                let parts: Vec<String> = self.dims.iter().map(|n| format!("[{n}]")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// On-disk form of a domain: `{"kind":"grid","n":6,"d":2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
}

impl DomainSpec {
    /// Validates the header and builds the domain.
    pub fn to_domain(&self) -> Result<Domain> {
        let need = |v: Option<usize>, name: &str| {
            v.filter(|&x| x >= 1)
                .ok_or_else(|| KmtError::Parse(format!("domain field `{name}` missing or zero")))
        };
        let domain = match self.kind {
            DomainKind::Line => Domain::line(need(self.n, "n")?),
            DomainKind::Grid => Domain::grid(need(self.n, "n")?, need(self.d, "d")?),
            DomainKind::Cube => Domain::cube(need(self.d, "d")?),
            DomainKind::Rect => {
                let dims = self.dims.clone().ok_or_else(|| KmtError::Parse("rect domain needs `dims`".into()))?;
                if dims.is_empty() || dims.contains(&0) {
                    return Err(KmtError::Parse("rect dims must be nonempty and positive".into()));
                }
                Domain::rect(dims)
            }
        };
        let bits = domain.dims.iter().map(|&n| (n as f64).log2()).sum::<f64>();
        if bits > 40.0 {
            return Err(KmtError::Parse(format!("domain {domain} is too large")));
        }
        Ok(domain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_roundtrip() {
        let dom = Domain::rect(vec![3, 4, 2]);
        assert_eq!(dom.size(), 24);
        for idx in 0..dom.size() {
            assert_eq!(dom.encode(&dom.decode(idx)), idx);
        }
        assert_eq!(dom.decode(1), vec![1, 0, 0]);
        assert_eq!(dom.decode(3), vec![0, 1, 0]);
    }

    #[test]
    fn index_order_is_a_linear_extension() {
        let dom = Domain::grid(4, 3);
        for a in 0..dom.size() {
            for b in 0..dom.size() {
                if dom.leq(a, b) {
                    assert!(a <= b);
                }
            }
        }
    }

    #[test]
    fn covers_match_leq() {
        let dom = Domain::cube(4);
        for a in 0..dom.size() {
            let lower: Vec<usize> = dom.lower_covers(a).collect();
            assert_eq!(lower.len(), dom.rank(a));
            for b in lower {
                assert!(dom.lt(b, a));
                assert_eq!(dom.rank(b) + 1, dom.rank(a));
            }
            for c in dom.upper_covers(a) {
                assert!(dom.lt(a, c));
            }
        }
    }

    #[test]
    fn kinds_and_spec_roundtrip() {
        for dom in [Domain::line(7), Domain::grid(6, 2), Domain::cube(5), Domain::rect(vec![5, 3])] {
            let json = serde_json::to_string(&dom.spec()).unwrap();
            let back: DomainSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_domain().unwrap(), dom);
        }
        assert_eq!(Domain::grid(5, 1).kind(), DomainKind::Line);
        assert_eq!(Domain::rect(vec![2, 2]).kind(), DomainKind::Cube);
        assert_eq!(Domain::line(9).height(), 9);
        assert_eq!(Domain::cube(6).height(), 7);
    }

    #[test]
    fn spec_rejects_missing_fields() {
        let spec: DomainSpec = serde_json::from_str(r#"{"kind":"grid","n":6}"#).unwrap();
        assert!(spec.to_domain().is_err());
    }
}
