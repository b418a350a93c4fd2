//! Antipode identities in the algebra of matrix coefficients, and compatibility of the
//! coproduct `Δ(t_ij) = Σ t_ik ⊗ t_kj` with the relations.
//!
//! A product of two coefficients pairs with `s` in the image of `U` in `End(V⊗V)` by
//! `⟨t_ab t_cd, s⟩ = s_{(ac),(bd)}`; that image is the commutant of `End_U(V⊗V)`.

use super::{relation_rows, BlockEchelon, PresentationInput, Word};
use crate::braiding::Braiding;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::intertwiners::{hom_space, FormPack};
use crate::linalg::{Mat, Support};
use crate::roots::proportionality;
use crate::uqmod::RepModule;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Basis of the commutant of `End_U(V⊗V)`, with `ε(s)` read off the invariant line `B'`.
pub fn evaluation_space<F: Field>(v: &RepModule<F>, b_dual: &Mat<F>) -> Result<Vec<(Mat<F>, F)>> {
    let n2 = v.dim() * v.dim();
    let hom = hom_space(v, 2, 2, false, usize::MAX)?;
    let support = Support::new(n2, n2, |_, _| true);
    let pairs: Vec<(&Mat<F>, &Mat<F>)> = hom.iter().map(|x| (x, x)).collect();
    support
        .solve(&pairs)
        .into_iter()
        .map(|s| {
            let img = s.mul(b_dual);
            let eps = if img.is_zero() {
                F::zero()
            } else {
                proportionality(&img, b_dual).ok_or_else(|| Error::Check("B' is not an eigenvector of the commutant".into()))?
            };
            Ok((s, eps))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AntipodeReport {
    pub evaluation_dim: usize,
    /// Nonzero entries of `Σ c_i' u c_k u⁻¹ ⟨t_k t_i', s⟩ − ε(s)` over the basis.
    pub first: usize,
    /// Same for `Σ u c_k u⁻¹ c_i' ⟨t_i' t_k, s⟩ − ε(s)`.
    pub second: usize,
    /// Both identities with `u` replaced by `v⁻¹`.
    pub first_v: usize,
    pub second_v: usize,
}

impl AntipodeReport {
    pub fn holds(&self) -> bool {
        self.first == 0 && self.second == 0 && self.first_v == 0 && self.second_v == 0
    }
}

/// `(Σ_{abfe} C_{(ab),(fe)} E_fe w E_ab w⁻¹, Σ C'_{(fe),(ab)} w E_ab w⁻¹ E_fe)` where `C, C'`
/// pair `t_ab t̃_fe` and `t̃_fe t_ab` with `s`, and `T̃ = A⁻¹TᵗA`.
fn contractions<F: Field>(s: &Mat<F>, a: &Mat<F>, a_inv: &Mat<F>, w: &Mat<F>, w_inv: &Mat<F>, n: usize) -> (Mat<F>, Mat<F>) {
    let ait = a_inv.transpose();
    let mut c1: HashMap<(usize, usize, usize, usize), F> = HashMap::new();
    let mut c2: HashMap<(usize, usize, usize, usize), F> = HashMap::new();
    let add = |m: &mut HashMap<_, F>, k, x: F| {
        let e = m.entry(k).or_insert_with(F::zero);
        *e = e.add(&x);
    };
    for (row, col, val) in s.entries() {
        // first slot: s_{(ah),(bg)} contributes to ⟨t_ab t_hg, s⟩
        let (a1, h) = (row / n, row % n);
        let (b1, g) = (col / n, col % n);
        for (f, x) in ait.row(g) {
            for (e, y) in a.row(h) {
                add(&mut c1, (a1, b1, *f as usize, *e as usize), x.mul(val).mul(y));
            }
        }
        // second slot: s_{(ha),(gb)} contributes to ⟨t_hg t_ab, s⟩
        let (h, a2) = (row / n, row % n);
        let (g, b2) = (col / n, col % n);
        for (f, x) in ait.row(g) {
            for (e, y) in a.row(h) {
                add(&mut c2, (*f as usize, *e as usize, a2, b2), x.mul(val).mul(y));
            }
        }
    }
    let wt = w.transpose();
    let mut m1: Mat<F> = Mat::zeros(n, n);
    for ((a1, b1, f, e), c) in &c1 {
        // (E_fe w E_ab w⁻¹)_{f y} = w_ea (w⁻¹)_by
        let wea = w.get(*e, *a1);
        if wea.is_zero() {
            continue;
        }
        let cw = c.mul(&wea);
        for (y, z) in w_inv.row(*b1) {
            let cur = m1.get(*f, *y as usize);
            m1.set(*f, *y as usize, cur.add(&cw.mul(z)));
        }
    }
    let mut m2: Mat<F> = Mat::zeros(n, n);
    for ((f, e, a2, b2), c) in &c2 {
        // (w E_ab w⁻¹ E_fe)_{x e} = w_xa (w⁻¹)_bf
        let wbf = w_inv.get(*b2, *f);
        if wbf.is_zero() {
            continue;
        }
        let cw = c.mul(&wbf);
        for (x, z) in wt.row(*a2) {
            let cur = m2.get(*x as usize, *e);
            m2.set(*x as usize, *e, cur.add(&cw.mul(z)));
        }
    }
    (m1, m2)
}

/// Both antipode identities, contracted against every basis element of the evaluation space.
pub fn antipode_identity_check<F: Field>(v: &RepModule<F>, br: &Braiding<F>, pack: &FormPack<F>) -> Result<AntipodeReport> {
    let n = v.dim();
    let space = evaluation_space(v, &pack.b_dual)?;
    let u_inv = br.u.inverse()?;
    let v_inv = br.v.inverse()?;
    let mut rep = AntipodeReport { evaluation_dim: space.len(), first: 0, second: 0, first_v: 0, second_v: 0 };
    for (s, eps) in &space {
        let target = Mat::identity(n).scale(eps);
        let (m1, m2) = contractions(s, &pack.a, &pack.a_inv, &br.u, &u_inv, n);
        rep.first += m1.sub(&target).nnz();
        rep.second += m2.sub(&target).nnz();
        let (m1, m2) = contractions(s, &pack.a, &pack.a_inv, &v_inv, &br.v, n);
        rep.first_v += m1.sub(&target).nnz();
        rep.second_v += m2.sub(&target).nnz();
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoproductReport {
    pub relations: usize,
    /// Relations whose coproduct leaves `I₂ ⊗ W₂ + W₂ ⊗ I₂`.
    pub failures: Vec<String>,
}

/// `Δ` of a letter as `(left, right)` letter pairs.
fn letter_coproduct(x: u16, n: usize) -> Vec<(u16, u16)> {
    let nn = n * n;
    let x = x as usize;
    if x < nn {
        let (i, j) = (x / n, x % n);
        (0..n).map(|k| ((i * n + k) as u16, (k * n + j) as u16)).collect()
    } else {
        let (i, j) = ((x - nn) / n, (x - nn) % n);
        (0..n).map(|k| ((nn + k * n + j) as u16, (nn + i * n + k) as u16)).collect()
    }
}

fn word_coproduct(w: &[u16], n: usize) -> Vec<(Word, Word)> {
    let mut acc: Vec<(Word, Word)> = vec![(Vec::new(), Vec::new())];
    for &x in w {
        let parts = letter_coproduct(x, n);
        acc = acc
            .iter()
            .flat_map(|(a, b)| {
                parts.iter().map(move |(p, q)| {
                    let mut a2 = a.clone();
                    a2.push(*p);
                    let mut b2 = b.clone();
                    b2.push(*q);
                    (a2, b2)
                })
            })
            .collect();
    }
    acc
}

/// Every relation row maps under `Δ` into the ideal of the two-fold algebra, using the
/// relation rows themselves (no multipliers) on words of length `≤ 2`.
pub fn coproduct_check<F: Field>(input: &PresentationInput<F>) -> Result<CoproductReport> {
    let n = input.n;
    let g = input.letters();
    let rels = relation_rows(input)?;
    let mut words: Vec<Word> = Vec::new();
    for x in 0..g as u16 {
        for y in 0..g as u16 {
            words.push(vec![x, y]);
        }
    }
    words.extend((0..g as u16).map(|x| vec![x]));
    words.push(Vec::new());
    let index: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
    let mut ech = BlockEchelon::new(words.len());
    for r in &rels {
        let v = crate::linalg::sparse_from_pairs(r.terms.iter().map(|(w, c)| (index[w], c.clone())).collect());
        ech.insert(&v);
    }
    let mut normal: HashMap<Word, Vec<(u32, F)>> = HashMap::new();
    let mut nf = |w: &Word, ech: &mut BlockEchelon<F>| -> Vec<(u32, F)> {
        normal.entry(w.clone()).or_insert_with(|| ech.reduce(&[(index[w], F::one())])).clone()
    };
    let mut failures = Vec::new();
    for r in &rels {
        let mut acc: HashMap<(u32, u32), F> = HashMap::new();
        for (w, c) in &r.terms {
            for (a, b) in word_coproduct(w, n) {
                let pa = nf(&a, &mut ech);
                let pb = nf(&b, &mut ech);
                for (i, x) in &pa {
                    let cx = c.mul(x);
                    for (j, y) in &pb {
                        let e = acc.entry((*i, *j)).or_insert_with(F::zero);
                        *e = e.add(&cx.mul(y));
                    }
                }
            }
        }
        if acc.values().any(|x| !x.is_zero()) {
            failures.push(r.name.clone());
        }
    }
    Ok(CoproductReport { relations: rels.len(), failures })
}
