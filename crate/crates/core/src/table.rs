//! Bit-packed truth tables.

use crate::domain::Domain;
use crate::error::{KmtError, Result};
use crate::oracle::BoolFn;

/// A Boolean function stored explicitly, one bit per point in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    domain: Domain,
    words: Vec<u64>,
}

impl TruthTable {
    /// The all-zero function.
    pub fn zeros(domain: Domain) -> Self {
        let words = vec![0u64; domain.size().div_ceil(64)];
        TruthTable { domain, words }
    }

    /// The constant function with value `b`.
    pub fn constant(domain: Domain, b: bool) -> Self {
        let mut t = Self::zeros(domain);
        if b {
            for i in 0..t.len() {
                t.set(i, true);
            }
        }
        t
    }

    /// Tabulates `f` over every index.
    pub fn from_fn(domain: Domain, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zeros(domain);
        for i in 0..t.len() {
            if f(i) {
                t.set(i, true);
            }
        }
        t
    }

    /// Builds a table from values listed in index order.
    pub fn from_bools(domain: Domain, values: &[bool]) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(KmtError::InvalidParameter(format!(
                "expected {} values, got {}",
                domain.size(),
                values.len()
            )));
        }
        Ok(Self::from_fn(domain, |i| values[i]))
    }

    /// Line table from a 0/1 slice, e.g. `&[1, 0, 1, 0]`.
    pub fn line_from_bits(bits: &[u8]) -> Self {
        Self::from_fn(Domain::line(bits.len()), |i| bits[i] != 0)
    }

    /// Tabulates an arbitrary function without counting queries.
    pub fn tabulate(f: &dyn BoolFn) -> Self {
        Self::from_fn(f.domain().clone(), |i| f.value(i))
    }

    /// Builds a table from the low `N` bits of `mask` (small domains only).
    pub fn from_mask(domain: Domain, mask: u64) -> Self {
        assert!(domain.size() <= 64);
        Self::from_fn(domain, |i| (mask >> i) & 1 == 1)
    }

    /// Low bits as a mask (small domains only).
    pub fn to_mask(&self) -> u64 {
        assert!(self.len() <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.domain.size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, idx: usize) -> bool {
        (self.words[idx >> 6] >> (idx & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, idx: usize, b: bool) {
        let mask = 1u64 << (idx & 63);
        if b {
            self.words[idx >> 6] |= mask;
        } else {
            self.words[idx >> 6] &= !mask;
        }
    }

    /// Flips the value at `idx`.
    pub fn flip(&mut self, idx: usize) {
        self.words[idx >> 6] ^= 1u64 << (idx & 63);
    }

    /// Number of points with value 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of points where the two tables differ.
    pub fn hamming(&self, other: &TruthTable) -> usize {
        assert_eq!(self.domain, other.domain, "tables live on different domains");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Values as a vector of bools in index order.
    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Little-endian hex: byte `j` holds points `8j..8j+7`, point `8j` in the lowest bit.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len().div_ceil(8);
        let mut out = String::with_capacity(2 * nbytes);
        for j in 0..nbytes {
            let byte = (self.words[j / 8] >> (8 * (j % 8))) & 0xff;
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Inverse of [`TruthTable::to_hex`]; rejects wrong lengths and stray high bits.
    pub fn from_hex(domain: Domain, hex: &str) -> Result<Self> {
        let nbytes = domain.size().div_ceil(8);
        let hex = hex.trim();
        if hex.len() != 2 * nbytes {
            return Err(KmtError::Parse(format!(
                "expected {} hex digits for {} points, got {}",
                2 * nbytes,
                domain.size(),
                hex.len()
            )));
        }
        let mut t = Self::zeros(domain);
        for j in 0..nbytes {
            let byte = u8::from_str_radix(&hex[2 * j..2 * j + 2], 16)
                .map_err(|e| KmtError::Parse(format!("bad hex at byte {j}: {e}")))?;
            for bit in 0..8 {
                if (byte >> bit) & 1 == 1 {
                    let idx = 8 * j + bit;
                    if idx >= t.len() {
                        return Err(KmtError::Parse("bits set beyond the last point".into()));
                    }
                    t.set(idx, true);
                }
            }
        }
        Ok(t)
    }
}

impl BoolFn for TruthTable {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn value(&self, idx: usize) -> bool {
        self.get(idx)
    }
}
