//! Filtered Peter–Weyl counts `Σ (dim W)^2` over irreducibles of `G ⋊ Γ` in
//! `⊕_{d' ≤ d} V^{⊗d'}`, V the adjoint representation.
//!
//! A Γ-fixed highest weight λ splits into `(λ, ±)` according to the eigenvalues of
//! the diagram involution on the highest-weight vectors of weight λ; a non-fixed λ
//! gives one induced irreducible of dimension `2 dim V_λ`.

use super::adjoint::ClassicalAdjoint;
use super::datum::{RootDatum, Weight};
use super::weyl::Labels;
use crate::error::Result;
use crate::field::Field;
use crate::linalg::{Mat, SparseVec};
use crate::scalar::Rational;
use std::collections::{BTreeMap, BTreeSet};

/// How the irreducible `W` of `G ⋊ Γ` restricts: a fixed weight with a sign, or an orbit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GammaIrrep {
    Fixed(Labels, i8),
    Orbit(Labels, Labels),
}

pub struct PeterWeyl<'a> {
    datum: &'a RootDatum,
    adj: &'a ClassicalAdjoint,
    use_gamma: bool,
}

impl<'a> PeterWeyl<'a> {
    pub fn new(datum: &'a RootDatum, adj: &'a ClassicalAdjoint, use_gamma: bool) -> Self {
        PeterWeyl { datum, adj, use_gamma: use_gamma && adj.gamma.is_some() }
    }

    /// Irreducibles of `G ⋊ Γ` (or of G when Γ is ignored) occurring in `V^{⊗d}`.
    pub fn irreps_in_power(&self, d: usize) -> Result<BTreeSet<GammaIrrep>> {
        let th = self.datum.dynkin_labels(&self.datum.max_root);
        let dec = self.datum.tensor_power(&th, d)?;
        let mut out = BTreeSet::new();
        let g = &self.adj.gamma_group;
        for lam in dec.keys() {
            if !self.use_gamma {
                out.insert(GammaIrrep::Fixed(lam.clone(), 1));
                continue;
            }
            let glam = g.act(lam);
            if glam != *lam {
                let (a, b) = if *lam < glam { (lam.clone(), glam) } else { (glam, lam.clone()) };
                out.insert(GammaIrrep::Orbit(a, b));
                continue;
            }
            for s in self.signs_on_highest_vectors(lam, d) {
                out.insert(GammaIrrep::Fixed(lam.clone(), s));
            }
        }
        Ok(out)
    }

    pub fn irrep_dim(&self, w: &GammaIrrep) -> Result<u64> {
        Ok(match w {
            GammaIrrep::Fixed(l, _) => self.datum.weyl_dim_labels(l)?,
            GammaIrrep::Orbit(l, _) => 2 * self.datum.weyl_dim_labels(l)?,
        })
    }

    /// `Σ (dim W)^2` over distinct irreducibles in `⊕_{d' ≤ d} V^{⊗d'}`.
    pub fn dim(&self, d: usize) -> Result<u64> {
        let mut all = BTreeSet::new();
        for k in 0..=d {
            all.extend(self.irreps_in_power(k)?);
        }
        all.iter().map(|w| Ok(self.irrep_dim(w)?.pow(2))).sum()
    }

    /// Signs `±1` occurring for the involution on `HW_λ(V^{⊗d})`.
    fn signs_on_highest_vectors(&self, lam: &[i64], d: usize) -> Vec<i8> {
        let rank = self.datum.rank;
        let weights = self.adj.weights(rank);
        let target = self.datum.root_lattice_weight(lam).expect("root lattice");
        let words = tensor_words_of_weight(&weights, d, &target);
        let index: BTreeMap<&Vec<usize>, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let sigma = self.adj.gamma.as_ref().expect("nontrivial Γ");
        let mut out = Vec::new();
        for s in [1i8, -1] {
            // equations: e_i v = 0 for all i, σ v = s v
            let mut rows: Vec<SparseVec<Rational>> = Vec::new();
            for i in 0..rank {
                let e = self.adj.ad_e(self.datum, i);
                rows.extend(transpose_rows(&apply_tensor(&e, &words, d, Action::Derivation)));
            }
            let action = apply_tensor(sigma, &words, d, Action::Group);
            let mut sig_rows: BTreeMap<Vec<usize>, Vec<(u32, Rational)>> = BTreeMap::new();
            for (col, img) in action.iter().enumerate() {
                for (w, x) in img {
                    sig_rows.entry(w.clone()).or_default().push((col as u32, x.clone()));
                }
            }
            for (k, w) in words.iter().enumerate() {
                sig_rows.entry(w.clone()).or_default().push((k as u32, Rational::from_integer((-s as i64).into())));
            }
            for (w, r) in sig_rows {
                debug_assert!(index.contains_key(&w), "involution preserves a fixed weight space");
                rows.push(crate::linalg::sparse_from_pairs(r));
            }
            let m = Mat::from_rows(rows.len(), words.len(), rows);
            if !m.kernel().is_empty() {
                out.push(s);
            }
        }
        out
    }
}

/// Multi-indices of length `d` whose weights sum to `target`.
fn tensor_words_of_weight(weights: &[Weight], d: usize, target: &Weight) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(weights: &[Weight], d: usize, rem: &Weight, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            if rem.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        for (k, w) in weights.iter().enumerate() {
            cur.push(k);
            rec(weights, d, &rem.sub(w), cur, out);
            cur.pop();
        }
    }
    rec(weights, d, target, &mut cur, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Action {
    /// `Σ_k 1⊗…⊗x⊗…⊗1`
    Derivation,
    /// `x^{⊗d}`
    Group,
}

/// Images of the basis words under `x` acting on `d`-fold tensors.
fn apply_tensor(x: &Mat<Rational>, words: &[Vec<usize>], d: usize, how: Action) -> Vec<Vec<(Vec<usize>, Rational)>> {
    let is_group = how == Action::Group;
    words
        .iter()
        .map(|w| {
            if is_group {
                let mut acc: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
                for &k in w {
                    let col: Vec<(usize, Rational)> =
                        (0..x.nrows()).filter_map(|r| { let v = x.get(r, k); (!v.is_zero()).then_some((r, v)) }).collect();
                    acc = acc
                        .into_iter()
                        .flat_map(|(p, c)| col.iter().map(move |(r, v)| { let mut p2 = p.clone(); p2.push(*r); (p2, c.mul(v)) }))
                        .collect();
                }
                acc
            } else {
                let mut acc = Vec::new();
                for pos in 0..d {
                    for r in 0..x.nrows() {
                        let v = x.get(r, w[pos]);
                        if !v.is_zero() {
                            let mut w2 = w.clone();
                            w2[pos] = r;
                            acc.push((w2, v));
                        }
                    }
                }
                acc
            }
        })
        .collect()
}

/// Turn column images into equation rows indexed by target word.
fn transpose_rows(images: &[Vec<(Vec<usize>, Rational)>]) -> Vec<SparseVec<Rational>> {
    let mut rows: BTreeMap<Vec<usize>, Vec<(u32, Rational)>> = BTreeMap::new();
    for (col, img) in images.iter().enumerate() {
        for (w, x) in img {
            rows.entry(w.clone()).or_default().push((col as u32, x.clone()));
        }
    }
    rows.into_values().map(crate::linalg::sparse_from_pairs).filter(|r| !r.is_empty()).collect()
}
