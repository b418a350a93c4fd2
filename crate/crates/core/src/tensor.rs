//! Tensor powers `V^{⊗m}` with the iterated coproduct action.
//!
//! Basis words `(i_1, …, i_m)` are numbered `((i_1 n + i_2) n + …)`, matching
//! [`Mat::kron`]. The coproduct is `Δ(E) = E⊗1 + K⊗E`, `Δ(F) = F⊗K⁻¹ + 1⊗F`, `Δ(K) = K⊗K`.

use crate::field::Field;
use crate::linalg::{Mat, SparseVec};
use crate::roots::Weight;
use crate::uqmod::RepModule;

/// `x^{⊗m}`, with `x^{⊗0}` the 1×1 identity.
pub fn kron_power<F: Field>(x: &Mat<F>, m: usize) -> Mat<F> {
    let mut acc = Mat::identity(1);
    for _ in 0..m {
        acc = acc.kron(x);
    }
    acc
}

/// `ι^{⊗a} ⊗ f ⊗ ι^{⊗b}` on an `n`-dimensional `V`.
pub fn lift<F: Field>(n: usize, a: usize, f: &Mat<F>, b: usize) -> Mat<F> {
    let left = Mat::identity(n.pow(a as u32));
    let right = Mat::identity(n.pow(b as u32));
    left.kron(f).kron(&right)
}

/// The flip `x ⊗ y ↦ y ⊗ x` on `V ⊗ V`.
pub fn flip<F: Field>(n: usize) -> Mat<F> {
    let perm: Vec<usize> = (0..n * n).map(|k| (k % n) * n + k / n).collect();
    Mat::permutation(&perm)
}

/// Generator matrices on `V^{⊗m}`.
#[derive(Clone, Debug)]
pub struct TensorPower<F> {
    pub m: usize,
    pub dim: usize,
    pub weights: Vec<Weight>,
    pub e: Vec<Mat<F>>,
    pub f: Vec<Mat<F>>,
    pub k: Vec<Mat<F>>,
    /// `P^{⊗m}` when `V` carries a diagram involution.
    pub gamma: Option<Mat<F>>,
}

impl<F: Field> TensorPower<F> {
    pub fn new(v: &RepModule<F>, m: usize) -> Self {
        let n = v.dim();
        let r = v.rank();
        let dim = n.pow(m as u32);
        let id = Mat::<F>::identity(n);
        let mut e = Vec::with_capacity(r);
        let mut f = Vec::with_capacity(r);
        let mut k = Vec::with_capacity(r);
        for i in 0..r {
            let mut ei = Mat::zeros(dim, dim);
            let mut fi = Mat::zeros(dim, dim);
            for pos in 0..m {
                let rest = m - pos - 1;
                let a = kron_power(&v.k[i], pos).kron(&v.e[i]).kron(&kron_power(&id, rest));
                ei = ei.add(&a);
                let b = kron_power(&id, pos).kron(&v.f[i]).kron(&kron_power(&v.k_inv[i], rest));
                fi = fi.add(&b);
            }
            e.push(ei);
            f.push(fi);
            k.push(kron_power(&v.k[i], m));
        }
        let weights = tensor_weights(&v.weights, m);
        let gamma = v.gamma.as_ref().map(|g| kron_power(&g.p, m));
        TensorPower { m, dim, weights, e, f, k, gamma }
    }

    /// `E_i` then `F_i`.
    pub fn generators(&self) -> Vec<&Mat<F>> {
        self.e.iter().chain(self.f.iter()).collect()
    }

    /// Basis of the highest-weight vectors of weight `w`.
    pub fn highest_vectors(&self, w: &Weight) -> Vec<SparseVec<F>> {
        let idx: Vec<usize> = (0..self.dim).filter(|&k| self.weights[k] == *w).collect();
        if idx.is_empty() {
            return Vec::new();
        }
        let mut rows = Vec::new();
        for e in &self.e {
            let sub = column_restriction(e, &idx);
            rows.extend(sub.into_rows());
        }
        let ker = Mat::from_rows(rows.len(), idx.len(), rows).kernel();
        ker.into_iter().map(|v| v.into_iter().map(|(c, x)| (idx[c as usize] as u32, x)).collect()).collect()
    }
}

/// Weights of basis words of `V^{⊗m}`.
pub fn tensor_weights(w: &[Weight], m: usize) -> Vec<Weight> {
    let rank = w.first().map_or(0, |x| x.0.len());
    let mut acc = vec![Weight::zero(rank)];
    for _ in 0..m {
        acc = acc.iter().flat_map(|a| w.iter().map(move |b| a.add(b))).collect();
    }
    acc
}

/// Columns `idx` of `x`, renumbered `0..idx.len()`.
fn column_restriction<F: Field>(x: &Mat<F>, idx: &[usize]) -> Mat<F> {
    let pos: std::collections::HashMap<usize, usize> = idx.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let t = x.entries().filter_map(|(r, c, v)| pos.get(&c).map(|&c2| (r, c2, v.clone()))).collect();
    Mat::from_triplets(x.nrows(), idx.len(), t)
}
