//! Solutions `X` of `A_k X = X B_k` with a prescribed support.

use super::{sparse_from_pairs, Mat, SparseVec};
use crate::field::Field;
use std::collections::HashMap;

/// Outcome of an affine solve.
#[derive(Debug)]
pub enum Affine<F> {
    Unique(Mat<F>),
    Inconsistent,
    /// Solutions exist; the homogeneous system has this dimension.
    NotUnique(usize),
}

/// Unknown entries of an `n × m` matrix together with their variable numbering.
pub struct Support {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(u32, u32)>,
    by_row: Vec<Vec<(u32, u32)>>,
    by_col: Vec<Vec<(u32, u32)>>,
}

impl Support {
    pub fn new(rows: usize, cols: usize, mut allowed: impl FnMut(usize, usize) -> bool) -> Self {
        let mut entries = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if allowed(r, c) {
                    entries.push((r as u32, c as u32));
                }
            }
        }
        Self::from_entries(rows, cols, entries)
    }

    /// Support given by grading labels: `(r, c)` is allowed when `row_key[r] == col_key[c]`.
    pub fn graded<K: Eq + std::hash::Hash>(row_key: &[K], col_key: &[K]) -> Self {
        let mut by_key: HashMap<&K, Vec<u32>> = HashMap::new();
        for (c, k) in col_key.iter().enumerate() {
            by_key.entry(k).or_default().push(c as u32);
        }
        let mut entries = Vec::new();
        for (r, k) in row_key.iter().enumerate() {
            if let Some(cs) = by_key.get(k) {
                entries.extend(cs.iter().map(|&c| (r as u32, c)));
            }
        }
        Self::from_entries(row_key.len(), col_key.len(), entries)
    }

    fn from_entries(rows: usize, cols: usize, entries: Vec<(u32, u32)>) -> Self {
        let mut by_row = vec![Vec::new(); rows];
        let mut by_col = vec![Vec::new(); cols];
        for (v, &(r, c)) in entries.iter().enumerate() {
            by_row[r as usize].push((c, v as u32));
            by_col[c as usize].push((r, v as u32));
        }
        Support { rows, cols, entries, by_row, by_col }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_matrix<F: Field>(&self, v: &[(u32, F)]) -> Mat<F> {
        let t = v.iter().map(|(k, x)| {
            let (r, c) = self.entries[*k as usize];
            (r as usize, c as usize, x.clone())
        });
        Mat::from_triplets(self.rows, self.cols, t.collect())
    }

    /// Coordinates of `x` in the variables; `None` if `x` leaves the support.
    pub fn coordinates<F: Field>(&self, x: &Mat<F>) -> Option<SparseVec<F>> {
        let mut out = Vec::with_capacity(x.nnz());
        for (r, c, v) in x.entries() {
            let k = self.by_row[r].iter().find(|(cc, _)| *cc as usize == c)?.1;
            out.push((k, v.clone()));
        }
        Some(sparse_from_pairs(out))
    }

    fn equation_map<F: Field>(&self, a: &Mat<F>, b: &Mat<F>) -> HashMap<(u32, u32), Vec<(u32, F)>> {
        assert_eq!(a.nrows(), self.rows);
        assert_eq!(b.ncols(), self.cols);
        let mut eq: HashMap<(u32, u32), Vec<(u32, F)>> = HashMap::new();
        for (r, k, x) in a.entries() {
            for &(c, v) in &self.by_row[k] {
                eq.entry((r as u32, c)).or_default().push((v, x.clone()));
            }
        }
        for (k, c, y) in b.entries() {
            for &(r, v) in &self.by_col[k] {
                eq.entry((r, c as u32)).or_default().push((v, y.neg()));
            }
        }
        eq
    }

    fn sorted_rows<F: Field>(mut eq: HashMap<(u32, u32), Vec<(u32, F)>>) -> Vec<SparseVec<F>> {
        let mut keys: Vec<_> = eq.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|k| sparse_from_pairs(eq.remove(&k).unwrap()))
            .filter(|r| !r.is_empty())
            .collect()
    }

    /// Rows expressing `A X - X B` entrywise in the variables.
    pub fn equations<F: Field>(&self, a: &Mat<F>, b: &Mat<F>) -> Vec<SparseVec<F>> {
        Self::sorted_rows(self.equation_map(a, b))
    }

    /// Rows of `A X - X B - C`, the constant carried by an extra last column.
    pub fn affine_equations<F: Field>(&self, a: &Mat<F>, b: &Mat<F>, c: &Mat<F>) -> Vec<SparseVec<F>> {
        let mut eq = self.equation_map(a, b);
        let k = self.len() as u32;
        for (r, col, x) in c.entries() {
            eq.entry((r as u32, col as u32)).or_default().push((k, x.neg()));
        }
        Self::sorted_rows(eq)
    }

    /// Solve `A_k X - X B_k = C_k` on this support.
    pub fn solve_affine<F: Field>(&self, triples: &[(&Mat<F>, &Mat<F>, &Mat<F>)]) -> Affine<F> {
        let rows: Vec<SparseVec<F>> = triples.iter().flat_map(|(a, b, c)| self.affine_equations(a, b, c)).collect();
        let n = self.len() as u32;
        let ker = super::echelon::kernel(rows, self.len() + 1);
        let homogeneous = ker.iter().filter(|v| !v.iter().any(|(k, _)| *k == n)).count();
        let Some(p) = ker.iter().find(|v| v.iter().any(|(k, _)| *k == n)) else {
            return Affine::Inconsistent;
        };
        if homogeneous > 0 {
            return Affine::NotUnique(homogeneous);
        }
        let c = p.iter().find(|(k, _)| *k == n).unwrap().1.inv().unwrap();
        let v: SparseVec<F> = p.iter().filter(|(k, _)| *k < n).map(|(k, x)| (*k, x.mul(&c))).collect();
        Affine::Unique(self.to_matrix(&v))
    }

    /// Basis of `{X supported here : A_k X = X B_k for all k}`.
    pub fn solve<F: Field>(&self, pairs: &[(&Mat<F>, &Mat<F>)]) -> Vec<Mat<F>> {
        let rows: Vec<SparseVec<F>> = pairs.iter().flat_map(|(a, b)| self.equations(a, b)).collect();
        super::echelon::kernel(rows, self.len()).iter().map(|v| self.to_matrix(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    #[test]
    fn commutant_of_a_diagonal_matrix() {
        let a: Mat<Rational> = Mat::diagonal(vec![int(1), int(2), int(2)]);
        let s = Support::new(3, 3, |_, _| true);
        let sol = s.solve(&[(&a, &a)]);
        assert_eq!(sol.len(), 5);
        for x in &sol {
            assert_eq!(a.mul(x), x.mul(&a));
        }
        let g = Support::graded(&[1, 2, 2], &[1, 2, 2]);
        assert_eq!(g.len(), 5);
        assert_eq!(g.coordinates(&Mat::<Rational>::identity(3)).unwrap().len(), 3);
    }
}
