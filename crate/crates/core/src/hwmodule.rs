//! Highest-weight modules built from F-monomials.
//!
//! Level `k` holds weight vectors `F_{i_1}…F_{i_k} ξ`. A candidate `F_i b` is zero or
//! dependent exactly when its E-images are, since a vector of weight below λ in a simple
//! module is determined by them; the E-images follow from
//! `E_j F_i b = F_i E_j b + δ_ij [⟨wt b, α_i^∨⟩]_{q_i} b`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{sparse_from_pairs, Decomposer, Mat, SparseVec};
use crate::roots::{RootDatum, Weight};
use crate::scalar::{quantum_integer, Rational, Scalar};
use std::collections::BTreeMap;

/// Scalars needed by the construction.
pub trait Deformation<F: Field>: Sync {
    /// `[n]_{q^d}`.
    fn qint(&self, n: i64, d: i64) -> F;
    /// `q^e`.
    fn qpow(&self, e: i64) -> F;
}

/// ℚ(q) with `q` an indeterminate.
pub struct Quantum;

impl Deformation<Scalar> for Quantum {
    fn qint(&self, n: i64, d: i64) -> Scalar {
        quantum_integer(n, d as u32)
    }
    fn qpow(&self, e: i64) -> Scalar {
        Scalar::q_pow(e as i32)
    }
}

/// The classical limit `q = 1` over ℚ.
pub struct Classical;

impl Deformation<Rational> for Classical {
    fn qint(&self, n: i64, _d: i64) -> Rational {
        Rational::from_integer(n.into())
    }
    fn qpow(&self, _e: i64) -> Rational {
        Rational::from_integer(1.into())
    }
}

/// Generator matrices of a highest-weight module.
#[derive(Clone, Debug)]
pub struct HwModule<F> {
    pub weights: Vec<Weight>,
    /// F-word producing each basis vector from ξ, applied right to left is `F_{w[0]}…`.
    pub words: Vec<Vec<usize>>,
    pub levels: Vec<usize>,
    pub e: Vec<Mat<F>>,
    pub f: Vec<Mat<F>>,
}

impl<F: Field> HwModule<F> {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

struct Vector<F> {
    weight: Weight,
    word: Vec<usize>,
    /// `E_j` of this vector for each `j`, in basis coordinates.
    e: Vec<SparseVec<F>>,
}

/// Build `V_λ` for dominant root-lattice λ.
pub fn build<F: Field, D: Deformation<F>>(datum: &RootDatum, lambda: &Weight, ctx: &D) -> Result<HwModule<F>> {
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let expected = datum.weyl_dim(lambda)? as usize;
    let r = datum.rank;
    let stride = expected as u32;
    let mut basis: Vec<Vector<F>> = vec![Vector { weight: lambda.clone(), word: Vec::new(), e: vec![Vec::new(); r] }];
    let mut levels = vec![0usize];
    // f_img[b][i] = F_i of basis vector b, filled once the next level is built
    let mut f_img: Vec<Vec<SparseVec<F>>> = Vec::new();
    let mut level: Vec<usize> = vec![0];
    let mut depth = 0usize;
    while !level.is_empty() {
        depth += 1;
        // candidates grouped by weight, in construction order
        let mut groups: BTreeMap<Weight, Vec<(usize, usize)>> = BTreeMap::new();
        let mut order: Vec<Weight> = Vec::new();
        for &b in &level {
            for i in 0..r {
                let w = basis[b].weight.sub(&datum.simple_root(i));
                let g = groups.entry(w.clone()).or_default();
                if g.is_empty() {
                    order.push(w);
                }
                g.push((b, i));
            }
        }
        let mut next: Vec<usize> = Vec::new();
        let mut new_f: BTreeMap<(usize, usize), SparseVec<F>> = BTreeMap::new();
        for w in order {
            let mut dec: Decomposer<F> = Decomposer::new(expected * r);
            let mut chosen: Vec<usize> = Vec::new();
            for &(b, i) in &groups[&w] {
                let img = candidate_images(datum, ctx, &basis, &f_img, b, i);
                let flat: SparseVec<F> = img
                    .iter()
                    .enumerate()
                    .flat_map(|(j, v)| v.iter().map(move |(x, c)| (j as u32 * stride + x, c.clone())))
                    .collect();
                if dec.push(&flat) {
                    let idx = basis.len();
                    if idx >= expected {
                        return Err(Error::Dimension { what: "module".into(), expected, found: idx + 1 });
                    }
                    let mut word = vec![i];
                    word.extend(basis[b].word.iter().copied());
                    basis.push(Vector { weight: w.clone(), word, e: img });
                    levels.push(depth);
                    chosen.push(idx);
                    next.push(idx);
                    new_f.insert((b, i), vec![(idx as u32, F::one())]);
                } else {
                    let coords = dec.coordinates(&flat).expect("dependent vector lies in the span");
                    let comb: SparseVec<F> = coords.into_iter().map(|(k, x)| (chosen[k as usize] as u32, x)).collect();
                    new_f.insert((b, i), sparse_from_pairs(comb));
                }
            }
        }
        for &b in &level {
            f_img.resize_with(b + 1, Vec::new);
            f_img[b] = (0..r).map(|i| new_f.remove(&(b, i)).unwrap_or_default()).collect();
        }
        level = next;
    }
    let n = basis.len();
    if n != expected {
        return Err(Error::Dimension { what: "module".into(), expected, found: n });
    }
    f_img.resize_with(n, || vec![Vec::new(); r]);
    let mut e = Vec::with_capacity(r);
    let mut f = Vec::with_capacity(r);
    for j in 0..r {
        let mut te = Vec::new();
        let mut tf = Vec::new();
        for (b, v) in basis.iter().enumerate() {
            for (x, c) in &v.e[j] {
                te.push((*x as usize, b, c.clone()));
            }
            for (x, c) in &f_img[b][j] {
                tf.push((*x as usize, b, c.clone()));
            }
        }
        e.push(Mat::from_triplets(n, n, te));
        f.push(Mat::from_triplets(n, n, tf));
    }
    Ok(HwModule {
        weights: basis.iter().map(|v| v.weight.clone()).collect(),
        words: basis.into_iter().map(|v| v.word).collect(),
        levels,
        e,
        f,
    })
}

/// E-images of the candidate `F_i b` in basis coordinates.
fn candidate_images<F: Field, D: Deformation<F>>(
    datum: &RootDatum,
    ctx: &D,
    basis: &[Vector<F>],
    f_img: &[Vec<SparseVec<F>>],
    b: usize,
    i: usize,
) -> Vec<SparseVec<F>> {
    (0..datum.rank)
        .map(|j| {
            let mut acc: Vec<(u32, F)> = Vec::new();
            for (x, c) in &basis[b].e[j] {
                for (y, d) in &f_img[*x as usize][i] {
                    acc.push((*y, c.mul(d)));
                }
            }
            if i == j {
                let h = datum.coroot_pairing(&basis[b].weight, i);
                acc.push((b as u32, ctx.qint(h, datum.d[i])));
            }
            sparse_from_pairs(acc)
        })
        .collect()
}
