//! Coordinates with respect to a fixed list of vectors.

use super::echelon::Echelon;
use super::mat::SparseVec;
use crate::field::Field;

/// Expresses vectors as combinations of a basis `b_0, …, b_{k-1}` in a space of dimension `n`.
/// Each echelon row `[r | t]` keeps the invariant `r = Σ_k t_k b_k`.
#[derive(Clone, Debug)]
pub struct Decomposer<F> {
    ech: Echelon<F>,
    n: u32,
    len: usize,
}

impl<F: Field> Decomposer<F> {
    pub fn new(n: usize) -> Self {
        Decomposer { ech: Echelon::new(), n: n as u32, len: 0 }
    }

    /// Build from vectors; dependent ones are rejected with their index.
    pub fn from_vectors(n: usize, vs: &[SparseVec<F>]) -> std::result::Result<Self, usize> {
        let mut d = Self::new(n);
        for (k, v) in vs.iter().enumerate() {
            if !d.push(v) {
                return Err(k);
            }
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Append `v` if it is independent of the current vectors.
    pub fn push(&mut self, v: &[(u32, F)]) -> bool {
        if self.ech.reduce_lead(v).first().is_none_or(|e| e.0 >= self.n) {
            return false;
        }
        let mut tagged = v.to_vec();
        tagged.push((self.n + self.len as u32, F::one()));
        self.ech.insert(&tagged);
        self.len += 1;
        true
    }

    /// Coordinates of `v`, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[(u32, F)]) -> Option<SparseVec<F>> {
        let r = self.ech.reduce_lead(v);
        if r.first().is_some_and(|e| e.0 < self.n) {
            return None;
        }
        Some(r.into_iter().map(|(c, x)| (c - self.n, x.neg())).collect())
    }

    pub fn contains(&self, v: &[(u32, F)]) -> bool {
        self.ech.reduce_lead(v).first().is_none_or(|e| e.0 >= self.n)
    }
}
