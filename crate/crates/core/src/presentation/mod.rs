//! The algebra generated by matrix coefficients `T = (t_kl)` (and `T̃`) modulo the
//! relations, truncated by word length, with filtered dimensions bounded from above by
//! sparse elimination and from below by Peter–Weyl counts.
//!
//! Relations are homogeneous for the bigrading `deg t_kl = (wt_k, wt_l)`,
//! `deg t̃_kl = (-wt_l, -wt_k)`, so every computation splits into blocks.

mod antipode;
mod certificate;
mod elim;
mod relations;

pub use antipode::{antipode_identity_check, coproduct_check, evaluation_space, AntipodeReport, CoproductReport};
pub use certificate::{composite_certificate, CompositeCertificate, Evidence, Extension};
pub use elim::BlockEchelon;
pub use relations::{relation_rows, r2_rows, Relation};

use crate::error::{Error, Result};
use crate::field::{reduce, Field, Fp, ModP, Specialize};
use crate::linalg::Mat;
use crate::roots::Weight;
use crate::scalar::{rat, Rational, Scalar};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

/// A word in the generators; letters `< n²` are `t_kl` (`k n + l`), the rest `t̃_kl`.
pub type Word = Vec<u16>;

/// Which complete set of relations to impose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Selector {
    /// Generators `T, T̃`; `R T₁T₂ = T₂T₁R`, `L T₁T₂ = T L`, `T T̃ = T̃ T = 1`.
    R1R3Inv,
    /// Generators `T`; `R T₁T₂ = T₂T₁R`, `TᵗAT = A`, `T A⁻¹ Tᵗ = A⁻¹`, `L T₁T₂ = T L`.
    R1R2R3,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::R1R3Inv => "r1r3inv",
            Selector::R1R2R3 => "r1r2r3",
        })
    }
}

impl FromStr for Selector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r1r3inv" => Ok(Selector::R1R3Inv),
            "r1r2r3" => Ok(Selector::R1R2R3),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown relation selector `{s}`") }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationInput<F> {
    pub n: usize,
    pub weights: Vec<Weight>,
    pub r: Mat<F>,
    /// `None` drops the `L` relation.
    pub l: Option<Mat<F>>,
    pub a: Option<Mat<F>>,
    pub selector: Selector,
}

impl<F: Field> PresentationInput<F> {
    pub fn new(weights: Vec<Weight>, r: Mat<F>, l: Option<Mat<F>>, a: Option<Mat<F>>, selector: Selector) -> Result<Self> {
        let n = weights.len();
        if r.shape() != (n * n, n * n) {
            return Err(Error::Dimension { what: "R".into(), expected: n * n, found: r.nrows() });
        }
        r.inverse().map_err(|_| Error::Singular("R".into()))?;
        let sum = |ks: &[usize]| -> Vec<i64> {
            (0..weights[0].0.len()).map(|i| ks.iter().map(|&k| weights[k].0[i]).sum()).collect()
        };
        let homogeneous = |name: &str, m: &Mat<F>, split: &dyn Fn(usize, usize) -> (Vec<usize>, Vec<usize>)| {
            match m.entries().find(|(i, j, _)| {
                let (a, b) = split(*i, *j);
                sum(&a) != sum(&b)
            }) {
                Some((i, j, _)) => Err(Error::Check(format!("{name} does not preserve weight at ({i}, {j})"))),
                None => Ok(()),
            }
        };
        homogeneous("R", &r, &|i, j| (vec![i / n, i % n], vec![j / n, j % n]))?;
        if let Some(l) = &l {
            if l.shape() != (n, n * n) {
                return Err(Error::Dimension { what: "L".into(), expected: n * n, found: l.ncols() });
            }
            homogeneous("L", l, &|i, j| (vec![i], vec![j / n, j % n]))?;
        }
        if let Some(a) = &a {
            if a.shape() != (n, n) {
                return Err(Error::Dimension { what: "A".into(), expected: n, found: a.nrows() });
            }
            homogeneous("A", a, &|i, j| (vec![i, j], vec![]))?;
        }
        if selector == Selector::R1R2R3 {
            let a = a.as_ref().ok_or_else(|| Error::Check("the R2 selector needs A".into()))?;
            a.inverse().map_err(|_| Error::Singular("A".into()))?;
        }
        Ok(PresentationInput { n, weights, r, l, a, selector })
    }

    pub fn letters(&self) -> usize {
        match self.selector {
            Selector::R1R3Inv => 2 * self.n * self.n,
            Selector::R1R2R3 => self.n * self.n,
        }
    }

    /// Bidegree `(left, right)` flattened.
    pub fn letter_degree(&self, x: u16) -> Vec<i64> {
        let nn = self.n * self.n;
        let x = x as usize;
        let (tilde, k, l) = if x < nn { (false, x / self.n, x % self.n) } else { (true, (x - nn) / self.n, (x - nn) % self.n) };
        let (a, b) = if tilde { (self.weights[l].neg(), self.weights[k].neg()) } else { (self.weights[k].clone(), self.weights[l].clone()) };
        a.0.into_iter().chain(b.0).collect()
    }

    pub fn word_degree(&self, w: &[u16]) -> Vec<i64> {
        let rank = self.weights.first().map_or(0, |x| x.0.len());
        let mut acc = vec![0; 2 * rank];
        for &x in w {
            for (a, b) in acc.iter_mut().zip(self.letter_degree(x)) {
                *a += b;
            }
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Result<G> + Sync) -> Result<PresentationInput<G>> {
        let m = |x: &Mat<F>| x.try_map(&f);
        Ok(PresentationInput {
            n: self.n,
            weights: self.weights.clone(),
            r: m(&self.r)?,
            l: self.l.as_ref().map(m).transpose()?,
            a: self.a.as_ref().map(m).transpose()?,
            selector: self.selector,
        })
    }
}

/// Fields whose elements have images in `F_P`, used for the modular pre-pass.
pub trait ModularImage: Field {
    fn mod_p<const P: u64>(&self) -> Result<Fp<P>>;
}

/// `q` is sent to this value before reduction in the pre-pass over ℚ(q).
pub const PROBE_Q: (i64, i64) = (7919, 104_729);

impl ModularImage for Rational {
    fn mod_p<const P: u64>(&self) -> Result<Fp<P>> {
        reduce::<P>(self)
    }
}

impl ModularImage for Scalar {
    fn mod_p<const P: u64>(&self) -> Result<Fp<P>> {
        ModP::<P>::new(rat(PROBE_Q.0, PROBE_Q.1))?.apply(self)
    }
}

/// Primary pre-pass prime and the cross-check prime.
pub const P1: u64 = 2_305_843_009_213_693_951;
pub const P2: u64 = 4_611_686_018_427_387_847;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    CertifiedEqual,
    Gap,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::CertifiedEqual => "certified-equal",
            Status::Gap => "gap",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub d: usize,
    pub words: u64,
    pub lower: Option<u64>,
    pub upper: u64,
    pub status: Option<Status>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncatedAlgebra {
    pub selector: Selector,
    pub degree: usize,
    pub truncation: usize,
    pub letters: usize,
    pub blocks: usize,
    pub rows: usize,
    pub independent_rows: usize,
    /// Set when implied rows were added to the relations.
    pub evidence: Option<Evidence>,
    pub table: Vec<DegreeRow>,
}

impl TruncatedAlgebra {
    pub fn certified(&self) -> bool {
        self.table.iter().all(|r| r.status == Some(Status::CertifiedEqual))
    }

    pub fn uppers(&self) -> Vec<u64> {
        self.table.iter().map(|r| r.upper).collect()
    }
}

/// Default ceiling on the number of words of length `≤ D'`.
pub const DEFAULT_WORD_BUDGET: u64 = 4_000_000;

/// One bigraded piece: its words, longest first, and the exact echelon of its ideal rows.
pub struct Block<F> {
    pub key: Vec<i64>,
    pub words: Vec<Word>,
    pub lens: Vec<u8>,
    index: HashMap<Word, u32>,
    pub ech: BlockEchelon<F>,
    /// `dim(I ∩ F_d)` per `d`, from the two modular passes.
    pub modular: [Vec<usize>; 2],
    pub rows: usize,
}

impl<F: Field> Block<F> {
    pub fn column(&self, w: &[u16]) -> Option<u32> {
        self.index.get(w).copied()
    }

    /// `dim(I ∩ F_d)` for `d = 0..=top`, exact.
    pub fn ideal_dims(&self, top: usize) -> Vec<usize> {
        counts_by_degree(self.ech.pivots(), &self.lens, top)
    }

    pub fn words_up_to(&self, d: usize) -> usize {
        self.lens.iter().filter(|&&l| l as usize <= d).count()
    }

    /// Coordinates of a polynomial in this block, `None` if a word is missing.
    pub fn vector(&self, terms: &[(Word, F)]) -> Option<Vec<(u32, F)>> {
        let mut v = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            v.push((self.column(w)?, c.clone()));
        }
        Some(crate::linalg::sparse_from_pairs(v))
    }
}

fn counts_by_degree(pivots: impl Iterator<Item = u32>, lens: &[u8], top: usize) -> Vec<usize> {
    let mut at = vec![0usize; top + 1];
    for p in pivots {
        let l = lens[p as usize] as usize;
        if l <= top {
            at[l] += 1;
        }
    }
    let mut acc = 0;
    at.into_iter().map(|x| {
        acc += x;
        acc
    }).collect()
}

/// The relation ideal truncated at word length `D'`, restricted to the blocks `keys`.
pub struct TruncatedIdeal<F> {
    pub truncation: usize,
    pub letters: usize,
    pub blocks: BTreeMap<Vec<i64>, Block<F>>,
    pub rows: usize,
    pub independent_rows: usize,
}

/// Words of length `≤ max` over `letters` letters, by length.
fn all_words(letters: usize, max: usize) -> Vec<Vec<Word>> {
    let mut out = vec![vec![Vec::new()]];
    for len in 1..=max {
        let prev = &out[len - 1];
        let mut next = Vec::with_capacity(prev.len() * letters);
        for w in prev {
            for x in 0..letters as u16 {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.push(next);
    }
    out
}

fn add_deg(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<F: ModularImage> TruncatedIdeal<F> {
    /// Build and eliminate. `keys` selects the blocks; rows come from `relations`, multiplied
    /// on both sides by words, keeping naive length `≤ truncation`.
    pub fn build(
        input: &PresentationInput<F>,
        relations: &[Relation<F>],
        keys: &BTreeSet<Vec<i64>>,
        truncation: usize,
        budget: u64,
    ) -> Result<Self> {
        let g = input.letters();
        let total: u64 = (0..=truncation).map(|k| (g as u64).saturating_pow(k as u32)).sum();
        if total > budget {
            return Err(Error::Budget(format!("{total} words of length ≤ {truncation} over {g} letters, budget {budget}")));
        }
        let words = all_words(g, truncation);
        let degs: Vec<Vec<Vec<i64>>> = words.iter().map(|ws| ws.iter().map(|w| input.word_degree(w)).collect()).collect();
        let mut cols: BTreeMap<Vec<i64>, Vec<Word>> = keys.iter().map(|k| (k.clone(), Vec::new())).collect();
        for len in (0..=truncation).rev() {
            for (w, d) in words[len].iter().zip(&degs[len]) {
                if let Some(c) = cols.get_mut(d) {
                    c.push(w.clone());
                }
            }
        }
        // multiplier pairs (w, w') with their summed degree, by total length
        let min_deg = relations.iter().map(|r| r.degree).min().unwrap_or(truncation);
        let span = truncation.saturating_sub(min_deg);
        let mut pairs: Vec<Vec<(&Word, &Word, Vec<i64>)>> = vec![Vec::new(); span + 1];
        for la in 0..=span {
            for lb in 0..=span - la {
                for (wa, da) in words[la].iter().zip(&degs[la]) {
                    for (wb, db) in words[lb].iter().zip(&degs[lb]) {
                        pairs[la + lb].push((wa, wb, add_deg(da, db)));
                    }
                }
            }
        }
        let mut row_terms: BTreeMap<Vec<i64>, Vec<Vec<(Word, F)>>> = BTreeMap::new();
        for r in relations {
            if r.degree > truncation {
                continue;
            }
            for ps in &pairs[..=truncation - r.degree] {
                for (wa, wb, d) in ps {
                    let key = add_deg(&r.bidegree, d);
                    if keys.contains(&key) {
                        row_terms.entry(key).or_default().push(r.sandwich(wa, wb));
                    }
                }
            }
        }
        let rows: usize = row_terms.values().map(|v| v.len()).sum();
        let blocks: Vec<Result<Block<F>>> = cols
            .into_iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(key, ws)| {
                let terms = row_terms.get(&key).map(|v| v.as_slice()).unwrap_or(&[]);
                eliminate_block(key, ws, terms, truncation)
            })
            .collect();
        let mut out = BTreeMap::new();
        let mut independent = 0;
        for b in blocks {
            let b = b?;
            independent += b.ech.rank();
            out.insert(b.key.clone(), b);
        }
        Ok(TruncatedIdeal { truncation, letters: g, blocks: out, rows, independent_rows: independent })
    }
}

fn eliminate_block<F: ModularImage>(key: Vec<i64>, words: Vec<Word>, rows: &[Vec<(Word, F)>], top: usize) -> Result<Block<F>> {
    let index: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
    let lens: Vec<u8> = words.iter().map(|w| w.len() as u8).collect();
    let mut vecs: Vec<Vec<(u32, F)>> = rows
        .iter()
        .map(|r| crate::linalg::sparse_from_pairs(r.iter().map(|(w, c)| (index[w], c.clone())).collect()))
        .filter(|v| !v.is_empty())
        .collect();
    vecs.sort_by_key(|v| (v[0].0, v.len()));
    let ncols = words.len();
    let red1: Vec<Vec<(u32, Fp<P1>)>> = vecs.iter().map(|v| v.iter().map(|(c, x)| Ok((*c, x.mod_p::<P1>()?))).collect()).collect::<Result<_>>()?;
    let mut e1 = BlockEchelon::new(ncols);
    let mut keep = Vec::new();
    for (i, v) in red1.iter().enumerate() {
        if e1.insert(v).is_some() {
            keep.push(i);
        }
    }
    let m1 = counts_by_degree(e1.pivots(), &lens, top);
    drop(e1);
    let mut e2 = BlockEchelon::new(ncols);
    for v in &vecs {
        let r: Vec<(u32, Fp<P2>)> = v.iter().map(|(c, x)| Ok((*c, x.mod_p::<P2>()?))).collect::<Result<_>>()?;
        e2.insert(&r);
    }
    let m2 = counts_by_degree(e2.pivots(), &lens, top);
    drop(e2);
    let mut ech = BlockEchelon::new(ncols);
    for &i in &keep {
        if ech.insert(&vecs[i]).is_none() {
            return Err(Error::Check("rows independent modulo a prime are dependent exactly".into()));
        }
    }
    Ok(Block { key, words, lens, index, ech, modular: [m1, m2], rows: vecs.len() })
}

/// Keys of blocks met by words of length `≤ d`.
pub fn keys_up_to<F: Field>(input: &PresentationInput<F>, d: usize) -> BTreeSet<Vec<i64>> {
    all_words(input.letters(), d).iter().flatten().map(|w| input.word_degree(w)).collect()
}

/// Upper bounds on `dim F_d` for `d ≤ degree`, compared with `lower` where given.
pub fn filtered_dims<F: ModularImage>(
    input: &PresentationInput<F>,
    degree: usize,
    truncation: usize,
    lower: &dyn Fn(usize) -> Result<u64>,
    budget: u64,
) -> Result<TruncatedAlgebra> {
    filtered_dims_extended(input, None, degree, truncation, lower, budget)
}

/// As [`filtered_dims`], with the rows of `ext` added to the `R1R3Inv` relations.
pub fn filtered_dims_extended<F: ModularImage>(
    input: &PresentationInput<F>,
    ext: Option<&Extension<F>>,
    degree: usize,
    truncation: usize,
    lower: &dyn Fn(usize) -> Result<u64>,
    budget: u64,
) -> Result<TruncatedAlgebra> {
    if degree > truncation {
        return Err(Error::Check(format!("degree {degree} exceeds truncation {truncation}")));
    }
    let mut rels = relation_rows(input)?;
    if let Some(e) = ext {
        certificate::check_selector(input)?;
        rels.extend(e.rows.iter().cloned());
    }
    let keys = keys_up_to(input, degree);
    let ideal = TruncatedIdeal::build(input, &rels, &keys, truncation, budget)?;
    let mut table = Vec::new();
    for d in 0..=degree {
        let mut words = 0u64;
        let mut ideal_dim = 0u64;
        let mut modular = [0u64; 2];
        for b in ideal.blocks.values() {
            words += b.words_up_to(d) as u64;
            ideal_dim += b.ideal_dims(degree)[d] as u64;
            for (m, v) in modular.iter_mut().zip(&b.modular) {
                *m += v[d] as u64;
            }
        }
        if modular[0] != ideal_dim || modular[1] != ideal_dim {
            return Err(Error::Check(format!(
                "degree {d}: exact ideal dimension {ideal_dim} disagrees with modular {modular:?}"
            )));
        }
        let upper = words - ideal_dim;
        let lo = lower(d).ok();
        let status = match lo {
            Some(l) if upper < l => {
                return Err(Error::Check(format!("degree {d}: upper bound {upper} below the lower bound {l}")))
            }
            Some(l) if upper == l => Some(Status::CertifiedEqual),
            Some(_) => Some(Status::Gap),
            None => None,
        };
        table.push(DegreeRow { d, words, lower: lo, upper, status });
    }
    Ok(TruncatedAlgebra {
        selector: input.selector,
        degree,
        truncation,
        letters: ideal.letters,
        blocks: ideal.blocks.len(),
        rows: ideal.rows,
        independent_rows: ideal.independent_rows,
        evidence: ext.map(|e| e.evidence.clone()),
        table,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Member,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RedundancyReport {
    pub truncation: usize,
    pub entries: usize,
    pub members: usize,
    pub verdict: Membership,
}

/// Is every entry of `TᵗAT − A` in the ideal of the `R1R3Inv` relations truncated at `D'`?
pub fn r2_redundancy_check<F: ModularImage>(input: &PresentationInput<F>, truncation: usize, budget: u64) -> Result<RedundancyReport> {
    let mut inp = input.clone();
    inp.selector = Selector::R1R3Inv;
    let targets = r2_rows(&inp)?;
    let rels = relation_rows(&inp)?;
    let keys: BTreeSet<Vec<i64>> = targets.iter().map(|r| r.bidegree.clone()).collect();
    let mut ideal = TruncatedIdeal::build(&inp, &rels, &keys, truncation, budget)?;
    let mut members = 0;
    for t in &targets {
        let b = ideal.blocks.get_mut(&t.bidegree).unwrap();
        let v = b.vector(&t.terms).ok_or_else(|| Error::Check("R2 entry leaves its block".into()))?;
        if b.ech.reduce(&v).is_empty() {
            members += 1;
        }
    }
    let verdict = if members == targets.len() { Membership::Member } else { Membership::Inconclusive };
    Ok(RedundancyReport { truncation, entries: targets.len(), members, verdict })
}
