//! Row-sparse matrices over an arbitrary [`Field`].

use crate::error::{Error, Result};
use crate::field::Field;
use rayon::prelude::*;

pub type SparseVec<F> = Vec<(u32, F)>;

/// `a - c * b` for sorted sparse vectors.
pub fn axpy<F: Field>(a: &[(u32, F)], c: &F, b: &[(u32, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.mul(&b[j].1).neg()));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            v.sub_mul_assign(c, &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_pairs<F: Field>(mut v: Vec<(u32, F)>) -> SparseVec<F> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = last.1.add(&x),
            _ => out.push((c, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F>>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Mat { rows: n, cols: n, data: (0..n).map(|i| vec![(i as u32, F::one())]).collect() }
    }

    pub fn diagonal(d: Vec<F>) -> Self {
        let n = d.len();
        let data = d
            .into_iter()
            .enumerate()
            .map(|(i, x)| if x.is_zero() { Vec::new() } else { vec![(i as u32, x)] })
            .collect();
        Mat { rows: n, cols: n, data }
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i].push((j as u32, F::one()));
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<SparseVec<F>>) -> Self {
        assert_eq!(data.len(), rows);
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(data.iter().all(|r| r.iter().all(|e| (e.0 as usize) < cols && !e.1.is_zero())));
        Mat { rows, cols, data }
    }

    pub fn from_dense(d: Vec<Vec<F>>) -> Self {
        let rows = d.len();
        let cols = d.first().map_or(0, |r| r.len());
        let data = d
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.into_iter().enumerate().filter(|e| !e.1.is_zero()).map(|(j, x)| (j as u32, x)).collect()
            })
            .collect();
        Mat { rows, cols, data }
    }

    pub fn from_triplets(rows: usize, cols: usize, t: Vec<(usize, usize, F)>) -> Self {
        let mut buckets: Vec<Vec<(u32, F)>> = vec![Vec::new(); rows];
        for (i, j, x) in t {
            assert!(i < rows && j < cols);
            buckets[i].push((j as u32, x));
        }
        Mat { rows, cols, data: buckets.into_iter().map(sparse_from_pairs).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let data = (0..rows)
            .map(|i| (0..cols).filter_map(|j| { let x = f(i, j); (!x.is_zero()).then_some((j as u32, x)) }).collect())
            .collect();
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[(u32, F)] {
        &self.data[i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &SparseVec<F>> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<SparseVec<F>> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        match self.data[i].binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        let r = &mut self.data[i];
        match r.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(k) => {
                if x.is_zero() {
                    r.remove(k);
                } else {
                    r[k].1 = x;
                }
            }
            Err(k) => {
                if !x.is_zero() {
                    r.insert(k, (j as u32, x));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 as usize == i && r[0].1.is_one())
    }

    /// Nonzero entries as `(i, j, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j as usize, x)))
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (i, j, x) in self.entries() {
            out[i][j] = x.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<F>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j as usize].push((i as u32, x.clone()));
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().filter_map(|(j, x)| { let y = f(x); (!y.is_zero()).then_some((*j, y)) }).collect())
            .collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Result<G> + Sync) -> Result<Mat<G>> {
        let data: Result<Vec<SparseVec<G>>> = self
            .data
            .par_iter()
            .map(|r| {
                let mut out = Vec::with_capacity(r.len());
                for (j, x) in r {
                    let y = f(x)?;
                    if !y.is_zero() {
                        out.push((*j, y));
                    }
                }
                Ok(out)
            })
            .collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data: data? })
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    fn zip(&self, other: &Self, c: &F) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, c, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, &F::one().neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, &F::one())
    }

    /// Matrix product; rows are computed in parallel.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let data = self.data.par_iter().map(|r| row_times(r, other)).collect();
        Mat { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().fold(F::zero(), |acc, (j, x)| acc.add(&x.mul(&v[*j as usize]))))
            .collect()
    }

    /// Kronecker product `self ⊗ other`, index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        let mut data = Vec::with_capacity(self.rows * r2);
        for ra in &self.data {
            for rb in &other.data {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ja, xa) in ra {
                    for (jb, xb) in rb {
                        row.push((*ja * c2 as u32 + *jb, xa.mul(xb)));
                    }
                }
                data.push(row);
            }
        }
        Mat { rows: self.rows * r2, cols: self.cols * c2, data }
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(&self.get(i, i)))
    }

    /// Concatenate the columns of `self` and `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let off = self.cols as u32;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().cloned().chain(b.iter().map(|(j, x)| (j + off, x.clone()))).collect())
            .collect();
        Mat { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Flatten row-major into one sparse vector of length `rows * cols`.
    pub fn vectorize(&self) -> SparseVec<F> {
        let c = self.cols as u32;
        self.entries().map(|(i, j, x)| (i as u32 * c + j as u32, x.clone())).collect()
    }

    pub fn from_vectorized(rows: usize, cols: usize, v: &[(u32, F)]) -> Self {
        let t = v.iter().map(|(k, x)| (*k as usize / cols, *k as usize % cols, x.clone())).collect();
        Self::from_triplets(rows, cols, t)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Singular("non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let mut rows: Vec<SparseVec<F>> = aug.data;
        for col in 0..n as u32 {
            let piv = (col as usize..n)
                .filter(|&i| rows[i].first().is_some_and(|e| e.0 == col))
                .min_by_key(|&i| (rows[i].len(), rows[i][0].1.cost()));
            let Some(p) = piv else {
                return Err(Error::Singular(format!("no pivot in column {col}")));
            };
            rows.swap(col as usize, p);
            let inv = rows[col as usize][0].1.inv().expect("nonzero pivot");
            let prow: SparseVec<F> = rows[col as usize].iter().map(|(j, x)| (*j, x.mul(&inv))).collect();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == col as usize {
                    continue;
                }
                if let Ok(k) = row.binary_search_by_key(&col, |e| e.0) {
                    let c = row[k].1.clone();
                    *row = axpy(row, &c, &prow);
                }
            }
            rows[col as usize] = prow;
        }
        let data = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|e| e.0 as usize >= n).map(|(j, x)| (j - n as u32, x)).collect())
            .collect();
        Ok(Mat { rows: n, cols: n, data })
    }

    pub fn rank(&self) -> usize {
        super::echelon::rank(self.data.clone(), self.cols)
    }

    /// Basis of the right kernel `{x : self x = 0}` as sparse vectors.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        super::echelon::kernel(self.data.clone(), self.cols)
    }
}

fn row_times<F: Field>(r: &[(u32, F)], m: &Mat<F>) -> SparseVec<F> {
    match r.len() {
        0 => Vec::new(),
        1 => {
            let (k, a) = &r[0];
            m.data[*k as usize].iter().map(|(j, b)| (*j, a.mul(b))).collect()
        }
        _ => {
            let mut acc: Vec<(u32, F)> = Vec::new();
            for (k, a) in r {
                for (j, b) in &m.data[*k as usize] {
                    acc.push((*j, a.mul(b)));
                }
            }
            sparse_from_pairs(acc)
        }
    }
}

/// Weighted sum `sum_k c_k M_k` of equally shaped matrices.
pub fn linear_combination<F: Field>(terms: &[(F, &Mat<F>)]) -> Mat<F> {
    let (r, c) = terms[0].1.shape();
    let mut acc = Mat::zeros(r, c);
    for (x, m) in terms {
        acc = acc.sub(&m.scale(&x.neg()));
    }
    acc
}
