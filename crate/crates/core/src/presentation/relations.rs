//! Relation rows as noncommutative polynomials in the letters.

use super::{PresentationInput, Selector, Word};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Relation<F> {
    pub name: String,
    pub degree: usize,
    pub bidegree: Vec<i64>,
    pub terms: Vec<(Word, F)>,
}

impl<F: Field> Relation<F> {
    /// `w · r · w'`.
    pub fn sandwich(&self, left: &[u16], right: &[u16]) -> Vec<(Word, F)> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let mut x = Vec::with_capacity(left.len() + w.len() + right.len());
                x.extend_from_slice(left);
                x.extend_from_slice(w);
                x.extend_from_slice(right);
                (x, c.clone())
            })
            .collect()
    }
}

pub(super) struct Builder<'a, F> {
    input: &'a PresentationInput<F>,
    out: Vec<Relation<F>>,
}

impl<'a, F: Field> Builder<'a, F> {
    pub(super) fn new(input: &'a PresentationInput<F>) -> Self {
        Builder { input, out: Vec::new() }
    }

    pub(super) fn take(&mut self) -> Vec<Relation<F>> {
        std::mem::take(&mut self.out)
    }

    fn t(&self, k: usize, l: usize) -> u16 {
        (k * self.input.n + l) as u16
    }

    fn tt(&self, k: usize, l: usize) -> u16 {
        (self.input.n * self.input.n + k * self.input.n + l) as u16
    }

    fn push(&mut self, name: String, terms: impl IntoIterator<Item = (Word, F)>) {
        let mut acc: BTreeMap<Word, F> = BTreeMap::new();
        for (w, c) in terms {
            let e = acc.entry(w).or_insert_with(F::zero);
            *e = e.add(&c);
        }
        let terms: Vec<(Word, F)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some(first) = terms.first() else { return };
        let bidegree = self.input.word_degree(&first.0);
        debug_assert!(terms.iter().all(|(w, _)| self.input.word_degree(w) == bidegree));
        let degree = terms.iter().map(|(w, _)| w.len()).max().unwrap();
        self.out.push(Relation { name, degree, bidegree, terms });
    }

    pub(super) fn r1(&mut self) {
        let n = self.input.n;
        let r = &self.input.r;
        for a in 0..n {
            for b in 0..n {
                for e in 0..n {
                    for f in 0..n {
                        let mut terms = Vec::new();
                        for (cd, x) in r.row(a * n + b) {
                            let (c, d) = (*cd as usize / n, *cd as usize % n);
                            terms.push((vec![self.t(c, e), self.t(d, f)], x.clone()));
                        }
                        for c in 0..n {
                            for d in 0..n {
                                let x = r.get(c * n + d, e * n + f);
                                if !x.is_zero() {
                                    terms.push((vec![self.t(b, d), self.t(a, c)], x.neg()));
                                }
                            }
                        }
                        self.push(format!("R1[{a}{b},{e}{f}]"), terms);
                    }
                }
            }
        }
    }

    pub(super) fn r3(&mut self, l: &Mat<F>) {
        let n = self.input.n;
        for c in 0..n {
            for e in 0..n {
                for f in 0..n {
                    let mut terms = Vec::new();
                    for (ab, x) in l.row(c) {
                        let (a, b) = (*ab as usize / n, *ab as usize % n);
                        terms.push((vec![self.t(a, e), self.t(b, f)], x.clone()));
                    }
                    for d in 0..n {
                        let x = l.get(d, e * n + f);
                        if !x.is_zero() {
                            terms.push((vec![self.t(c, d)], x.neg()));
                        }
                    }
                    self.push(format!("R3[{c},{e}{f}]"), terms);
                }
            }
        }
    }

    pub(super) fn inverse(&mut self) {
        let n = self.input.n;
        for i in 0..n {
            for j in 0..n {
                let one = (i == j).then(|| (Vec::new(), F::one().neg()));
                let a: Vec<_> = (0..n).map(|k| (vec![self.t(i, k), self.tt(k, j)], F::one())).collect();
                self.push(format!("TT~[{i}{j}]"), a.into_iter().chain(one.clone()));
                let b: Vec<_> = (0..n).map(|k| (vec![self.tt(i, k), self.t(k, j)], F::one())).collect();
                self.push(format!("T~T[{i}{j}]"), b.into_iter().chain(one));
            }
        }
    }

    /// `(TᵗAT)_ij − A_ij`.
    pub(super) fn orthogonality(&mut self, a: &Mat<F>) {
        let n = self.input.n;
        for i in 0..n {
            for j in 0..n {
                let mut terms = Vec::new();
                for (k, row) in a.rows_iter().enumerate() {
                    for (l, x) in row {
                        terms.push((vec![self.t(k, i), self.t(*l as usize, j)], x.clone()));
                    }
                }
                let c = a.get(i, j);
                if !c.is_zero() {
                    terms.push((Vec::new(), c.neg()));
                }
                self.push(format!("TtAT[{i}{j}]"), terms);
            }
        }
    }

    /// `(T A⁻¹ Tᵗ)_ij − (A⁻¹)_ij`.
    pub(super) fn coorthogonality(&mut self, ai: &Mat<F>) {
        let n = self.input.n;
        for i in 0..n {
            for j in 0..n {
                let mut terms = Vec::new();
                for (k, row) in ai.rows_iter().enumerate() {
                    for (l, x) in row {
                        terms.push((vec![self.t(i, k), self.t(j, *l as usize)], x.clone()));
                    }
                }
                let c = ai.get(i, j);
                if !c.is_zero() {
                    terms.push((Vec::new(), c.neg()));
                }
                self.push(format!("TA-Tt[{i}{j}]"), terms);
            }
        }
    }
}

impl<F: Field> Builder<'_, F> {
    /// `t̃_ij − (A⁻¹TᵗA)_ij`.
    pub(super) fn collapse(&mut self, a: &Mat<F>, ai: &Mat<F>) {
        let n = self.input.n;
        for i in 0..n {
            for j in 0..n {
                let mut terms = vec![(vec![self.tt(i, j)], F::one())];
                for (k, x) in ai.row(i) {
                    for b in 0..n {
                        let y = a.get(b, j);
                        if !y.is_zero() {
                            terms.push((vec![self.t(b, *k as usize)], x.mul(&y).neg()));
                        }
                    }
                }
                self.push(format!("T~-A-TtA[{i}{j}]"), terms);
            }
        }
    }
}

/// All relation rows for the input's selector.
pub fn relation_rows<F: Field>(input: &PresentationInput<F>) -> Result<Vec<Relation<F>>> {
    let mut b = Builder { input, out: Vec::new() };
    b.r1();
    if let Some(l) = &input.l {
        b.r3(l);
    }
    match input.selector {
        Selector::R1R3Inv => b.inverse(),
        Selector::R1R2R3 => {
            let a = input.a.as_ref().ok_or_else(|| Error::Check("the R2 selector needs A".into()))?;
            b.orthogonality(a);
            b.coorthogonality(&a.inverse()?);
        }
    }
    Ok(b.out)
}

/// Entries of `TᵗAT − A`.
pub fn r2_rows<F: Field>(input: &PresentationInput<F>) -> Result<Vec<Relation<F>>> {
    let a = input.a.as_ref().ok_or_else(|| Error::Check("R2 needs A".into()))?;
    let mut b = Builder { input, out: Vec::new() };
    b.orthogonality(a);
    Ok(b.out)
}
