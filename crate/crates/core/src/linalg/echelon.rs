//! Incremental sparse row echelon forms, kernels and ranks.

use super::mat::SparseVec;
use crate::field::Field;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// Rows in echelon form keyed by their leading column; every stored row has
/// leading coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pivots: HashMap<u32, usize>,
    rows: Vec<SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon { pivots: HashMap::new(), rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.keys().copied()
    }

    pub fn has_pivot(&self, col: u32) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduce until the leading column carries no pivot (or the vector vanishes).
    pub fn reduce_lead(&self, v: &[(u32, F)]) -> SparseVec<F> {
        let mut acc: BTreeMap<u32, F> = v.iter().cloned().collect();
        loop {
            let Some((&c, _)) = acc.iter().next() else { return Vec::new() };
            let Some(&p) = self.pivots.get(&c) else { break };
            let f = acc.remove(&c).unwrap();
            subtract(&mut acc, &f, &self.rows[p][1..]);
        }
        acc.into_iter().collect()
    }

    /// Eliminate every pivot column from `v`.
    pub fn reduce_full(&self, v: &[(u32, F)]) -> SparseVec<F> {
        let mut acc: BTreeMap<u32, F> = v.iter().cloned().collect();
        let mut cursor = 0u32;
        loop {
            let next = acc.range(cursor..).map(|(c, _)| *c).find(|c| self.pivots.contains_key(c));
            let Some(c) = next else { break };
            let f = acc.remove(&c).unwrap();
            subtract(&mut acc, &f, &self.rows[self.pivots[&c]][1..]);
            cursor = c + 1;
        }
        acc.into_iter().collect()
    }

    pub fn contains(&self, v: &[(u32, F)]) -> bool {
        self.reduce_lead(v).is_empty()
    }

    /// Insert a vector; returns its new pivot column if it was independent.
    pub fn insert(&mut self, v: &[(u32, F)]) -> Option<u32> {
        let r = self.reduce_lead(v);
        if r.is_empty() {
            return None;
        }
        Some(self.push_reduced(r))
    }

    /// Insert a vector already known to have a non-pivot leading column.
    fn push_reduced(&mut self, mut r: SparseVec<F>) -> u32 {
        let lead = r[0].0;
        debug_assert!(!self.pivots.contains_key(&lead));
        let inv = r[0].1.inv().expect("nonzero lead");
        if !r[0].1.is_one() {
            for e in r.iter_mut() {
                e.1 = e.1.mul(&inv);
            }
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(r);
        lead
    }

    /// Bring to reduced row echelon form in place.
    pub fn make_reduced(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rows[i][0].0));
        for i in order {
            let row = std::mem::take(&mut self.rows[i]);
            let (lead, rest) = row.split_first().expect("stored rows are nonzero");
            let mut reduced = vec![lead.clone()];
            reduced.extend(self.reduce_full(rest));
            self.rows[i] = reduced;
        }
    }

    /// Kernel basis of the stored rows over the columns `cols`, assuming RREF.
    fn kernel_rref(&self, cols: &[u32]) -> Vec<SparseVec<F>> {
        let mut col_entries: HashMap<u32, Vec<(u32, F)>> = HashMap::new();
        for r in &self.rows {
            let lead = r[0].0;
            for (c, x) in &r[1..] {
                col_entries.entry(*c).or_default().push((lead, x.neg()));
            }
        }
        let mut out = Vec::new();
        for &f in cols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = col_entries.remove(&f).unwrap_or_default();
            v.push((f, F::one()));
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

fn subtract<F: Field>(acc: &mut BTreeMap<u32, F>, f: &F, tail: &[(u32, F)]) {
    for (c, x) in tail {
        match acc.entry(*c) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().sub_mul_assign(f, x);
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f.mul(x).neg());
            }
        }
    }
}

/// Split rows into groups that share no columns. Returns `(rows, columns)` per group.
pub fn components<F: Field>(rows: Vec<SparseVec<F>>, ncols: usize) -> Vec<(Vec<SparseVec<F>>, Vec<u32>)> {
    let mut parent: Vec<u32> = (0..ncols as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for r in &rows {
        if let Some((first, rest)) = r.split_first() {
            for (c, _) in rest {
                let a = find(&mut parent, first.0);
                let b = find(&mut parent, *c);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
    }
    let mut group_of: HashMap<u32, usize> = HashMap::new();
    let mut groups: Vec<(Vec<SparseVec<F>>, Vec<u32>)> = Vec::new();
    for c in 0..ncols as u32 {
        let r = find(&mut parent, c);
        let g = *group_of.entry(r).or_insert_with(|| {
            groups.push((Vec::new(), Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push(c);
    }
    for r in rows {
        if r.is_empty() {
            continue;
        }
        let g = group_of[&find(&mut parent, r[0].0)];
        groups[g].0.push(r);
    }
    groups
}

fn echelon_of<F: Field>(mut rows: Vec<SparseVec<F>>) -> Echelon<F> {
    rows.sort_by_key(|r| (r.len(), r.iter().map(|e| e.1.cost()).sum::<u32>()));
    let mut e = Echelon::new();
    for r in &rows {
        e.insert(r);
    }
    e
}

pub fn rank<F: Field>(rows: Vec<SparseVec<F>>, ncols: usize) -> usize {
    components(rows, ncols).into_par_iter().map(|(rs, _)| echelon_of(rs).rank()).sum()
}

/// Kernel basis of the row system, each vector normalized to 1 at its free column.
pub fn kernel<F: Field>(rows: Vec<SparseVec<F>>, ncols: usize) -> Vec<SparseVec<F>> {
    let parts: Vec<Vec<SparseVec<F>>> = components(rows, ncols)
        .into_par_iter()
        .map(|(rs, cols)| {
            let mut e = echelon_of(rs);
            e.make_reduced();
            e.kernel_rref(&cols)
        })
        .collect();
    let mut out: Vec<SparseVec<F>> = parts.into_iter().flatten().collect();
    out.sort_by_key(|v| v.iter().map(|e| e.0).max());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::scalar::{int, Rational};

    fn m(d: &[&[i64]]) -> Mat<Rational> {
        Mat::from_dense(d.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_kernel_inverse() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1], &[0, 0, 0]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        let mut x = vec![int(0); 3];
        for (j, v) in &k[0] {
            x[*j as usize] = v.clone();
        }
        assert!(a.mul_vec(&x).iter().all(|v| v == &int(0)));
        let b = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let bi = b.inverse().unwrap();
        assert!(b.mul(&bi).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn split_components() {
        let a = m(&[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 0, 2]]);
        let g = components(a.into_rows(), 4);
        assert_eq!(g.len(), 3);
        let a = m(&[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 0, 2]]);
        assert_eq!(a.kernel().len(), 1);
    }
}
