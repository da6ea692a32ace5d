//! Read access to Boolean functions, with and without query counting.

use std::cell::Cell;

use crate::domain::Domain;

/// A Boolean function on a grid poset. Evaluation through this trait is free;
/// testers wrap it in an [`Oracle`] to count what they read.
pub trait BoolFn: Send + Sync {
    fn domain(&self) -> &Domain;

    /// Value at a point index.
    fn value(&self, idx: usize) -> bool;
}

/// A function given by a closure over point indices.
pub struct FnBool<F> {
    domain: Domain,
    f: F,
}

impl<F: Fn(usize) -> bool + Send + Sync> FnBool<F> {
    pub fn new(domain: Domain, f: F) -> Self {
        FnBool { domain, f }
    }
}

impl<F: Fn(usize) -> bool + Send + Sync> BoolFn for FnBool<F> {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn value(&self, idx: usize) -> bool {
        (self.f)(idx)
    }
}

/// Query-counted access to a function. Every call to [`Oracle::query`] costs one
/// query, including repeats; testers that reuse answers keep their own memo.
pub struct Oracle<'a> {
    f: &'a dyn BoolFn,
    queries: Cell<u64>,
}

impl<'a> Oracle<'a> {
    pub fn new(f: &'a dyn BoolFn) -> Self {
        Oracle { f, queries: Cell::new(0) }
    }

    pub fn domain(&self) -> &Domain {
        self.f.domain()
    }

    /// Reads `f` at `idx` and counts one query.
    pub fn query(&self, idx: usize) -> bool {
        self.queries.set(self.queries.get() + 1);
        self.f.value(idx)
    }

    /// Reads `f` at a coordinate vector.
    pub fn query_at(&self, coords: &[usize]) -> bool {
        let idx = self.domain().encode(coords);
        self.query(idx)
    }

    /// Adds `n` queries to the counter without reading anything.
    ///
    /// Used where a tester replays the answer of a simulated sub-oracle that it
    /// would otherwise have to recompute at this cost.
    pub fn charge(&self, n: u64) {
        self.queries.set(self.queries.get() + n);
    }

    /// Queries made so far.
    pub fn queries(&self) -> u64 {
        self.queries.get()
    }
}
