//! The classical adjoint representation in a Chevalley basis.

use super::datum::{CartanType, RootDatum, Weight};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hwmodule::{self, Classical};
use crate::linalg::{Decomposer, Mat, SparseVec};
use crate::scalar::{int, Rational};
use serde::{Deserialize, Serialize};

/// Diagram automorphisms: the identity plus at most one involution of the nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaGroup {
    pub involution: Option<Vec<usize>>,
}

impl GammaGroup {
    pub fn of(t: CartanType) -> Self {
        let involution = match t {
            CartanType::A2 => Some(vec![1, 0]),
            CartanType::A3 => Some(vec![2, 1, 0]),
            _ => None,
        };
        GammaGroup { involution }
    }

    pub fn is_trivial(&self) -> bool {
        self.involution.is_none()
    }

    pub fn order(&self) -> usize {
        if self.is_trivial() {
            1
        } else {
            2
        }
    }

    /// Action on Dynkin labels or simple-root coordinates.
    pub fn act(&self, v: &[i64]) -> Vec<i64> {
        match &self.involution {
            None => v.to_vec(),
            Some(p) => {
                let mut out = vec![0; v.len()];
                for (i, x) in v.iter().enumerate() {
                    out[p[i]] = *x;
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisLabel {
    E(Weight),
    H(usize),
    F(Weight),
}

impl BasisLabel {
    pub fn weight(&self, rank: usize) -> Weight {
        match self {
            BasisLabel::E(a) => a.clone(),
            BasisLabel::H(_) => Weight::zero(rank),
            BasisLabel::F(a) => a.neg(),
        }
    }
}

/// Chevalley-basis data of `g`: order `e_α` (height descending), `h_i`, `f_α` (height ascending).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalAdjoint {
    pub dim: usize,
    pub labels: Vec<BasisLabel>,
    /// `bracket[c][a * dim + b]` is the `x_c` coefficient of `[x_a, x_b]`.
    pub bracket: Mat<Rational>,
    pub form_b: Mat<Rational>,
    pub killing: Mat<Rational>,
    /// Matrix of the pinned diagram automorphism, when Γ is nontrivial.
    pub gamma: Option<Mat<Rational>>,
    pub gamma_group: GammaGroup,
}

/// `e_α = [e_i, e_β] / s`, `f_α = [f_β, f_i] / t`.
struct Recipe {
    alpha: usize,
    i: usize,
    beta: usize,
    s: Rational,
    t: Rational,
}

impl ClassicalAdjoint {
    pub fn build(datum: &RootDatum) -> Result<Self> {
        let m = hwmodule::build::<Rational, _>(datum, &datum.max_root, &Classical)?;
        let r = datum.rank;
        let roots = &datum.positive_roots;
        let np = roots.len();
        let comm = |a: &Mat<Rational>, b: &Mat<Rational>| a.mul(b).sub(&b.mul(a));
        let mut e: Vec<Option<Mat<Rational>>> = vec![None; np];
        let mut f: Vec<Option<Mat<Rational>>> = vec![None; np];
        let h: Vec<Mat<Rational>> = (0..r).map(|i| comm(&m.e[i], &m.f[i])).collect();
        for i in 0..r {
            e[i] = Some(m.e[i].clone());
            f[i] = Some(m.f[i].clone());
        }
        let mut recipes = Vec::new();
        for a in r..np {
            let alpha = &roots[a];
            let (i, beta) = (0..r)
                .find_map(|i| {
                    let b = alpha.sub(&datum.simple_root(i));
                    roots.iter().position(|x| *x == b).map(|k| (i, k))
                })
                .expect("non-simple root has a predecessor");
            let mut p = 0;
            let mut w = roots[beta].sub(&datum.simple_root(i));
            while roots.contains(&w) {
                p += 1;
                w = w.sub(&datum.simple_root(i));
            }
            let s = int(p + 1);
            let ea = comm(&m.e[i], e[beta].as_ref().unwrap()).scale(&s.recip());
            let fa_raw = comm(f[beta].as_ref().unwrap(), &m.f[i]);
            let ha = coroot_matrix(datum, alpha, &h);
            let c = proportionality(&comm(&ea, &fa_raw), &ha)
                .ok_or_else(|| Error::Check(format!("[e_α, f_α] not proportional to h_α for {alpha:?}")))?;
            let t = c.clone();
            f[a] = Some(fa_raw.scale(&c.recip()));
            e[a] = Some(ea);
            recipes.push(Recipe { alpha: a, i, beta, s, t });
        }
        let mut labels = Vec::new();
        let mut mats = Vec::new();
        for a in (0..np).rev() {
            labels.push(BasisLabel::E(roots[a].clone()));
            mats.push(e[a].clone().unwrap());
        }
        for (i, hi) in h.iter().enumerate() {
            labels.push(BasisLabel::H(i));
            mats.push(hi.clone());
        }
        for a in 0..np {
            labels.push(BasisLabel::F(roots[a].clone()));
            mats.push(f[a].clone().unwrap());
        }
        let dim = mats.len();
        let n = m.dim();
        let vecs: Vec<SparseVec<Rational>> = mats.iter().map(|x| x.vectorize()).collect();
        let dec = Decomposer::from_vectors(n * n, &vecs).map_err(|k| Error::Check(format!("basis element {k} dependent")))?;
        let mut trip = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                let c = comm(&mats[a], &mats[b]).vectorize();
                let coords = dec.coordinates(&c).ok_or_else(|| Error::Check("bracket leaves the span".into()))?;
                for (k, x) in coords {
                    trip.push((k as usize, a * dim + b, x));
                }
            }
        }
        let bracket = Mat::from_triplets(dim, dim * dim, trip);
        let form_b = normalized_form(datum, &labels);
        let killing = killing_form(&bracket, dim);
        let gamma_group = GammaGroup::of(datum.cartan_type);
        let mut adj = ClassicalAdjoint { dim, labels, bracket, form_b, killing, gamma: None, gamma_group };
        if let Some(perm) = adj.gamma_group.involution.clone() {
            adj.gamma = Some(adj.pinned_automorphism(datum, &perm, &recipes));
        }
        Ok(adj)
    }

    pub fn index_of(&self, l: &BasisLabel) -> usize {
        self.labels.iter().position(|x| x == l).expect("label present")
    }

    pub fn weights(&self, rank: usize) -> Vec<Weight> {
        self.labels.iter().map(|l| l.weight(rank)).collect()
    }

    /// `[x, y]` on coordinate vectors.
    pub fn bracket_of(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (c, row) in self.bracket.rows_iter().enumerate() {
            for (k, v) in row {
                let (a, b) = (*k as usize / self.dim, *k as usize % self.dim);
                if !x[a].is_zero() && !y[b].is_zero() {
                    out[c] += v * &x[a] * &y[b];
                }
            }
        }
        out
    }

    /// `ad(x_a)` as a `dim × dim` matrix.
    pub fn ad(&self, a: usize) -> Mat<Rational> {
        let t: Vec<(usize, usize, Rational)> = self
            .bracket
            .entries()
            .filter(|(_, k, _)| k / self.dim == a)
            .map(|(c, k, v)| (c, k % self.dim, v.clone()))
            .collect();
        Mat::from_triplets(self.dim, self.dim, t)
    }

    pub fn ad_e(&self, datum: &RootDatum, i: usize) -> Mat<Rational> {
        self.ad(self.index_of(&BasisLabel::E(datum.simple_root(i))))
    }

    pub fn ad_f(&self, datum: &RootDatum, i: usize) -> Mat<Rational> {
        self.ad(self.index_of(&BasisLabel::F(datum.simple_root(i))))
    }

    fn pinned_automorphism(&self, datum: &RootDatum, perm: &[usize], recipes: &[Recipe]) -> Mat<Rational> {
        let np = datum.positive_roots.len();
        let unit = |k: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); self.dim];
            v[k] = Rational::one();
            v
        };
        let e_idx = |a: usize| self.index_of(&BasisLabel::E(datum.positive_roots[a].clone()));
        let f_idx = |a: usize| self.index_of(&BasisLabel::F(datum.positive_roots[a].clone()));
        let mut img: Vec<Option<Vec<Rational>>> = vec![None; self.dim];
        for i in 0..datum.rank {
            img[e_idx(i)] = Some(unit(e_idx(perm[i])));
            img[f_idx(i)] = Some(unit(f_idx(perm[i])));
            img[self.index_of(&BasisLabel::H(i))] = Some(unit(self.index_of(&BasisLabel::H(perm[i]))));
        }
        for rc in recipes {
            let se = self.bracket_of(img[e_idx(rc.i)].as_ref().unwrap(), img[e_idx(rc.beta)].as_ref().unwrap());
            img[e_idx(rc.alpha)] = Some(se.iter().map(|x| x / &rc.s).collect());
            let sf = self.bracket_of(img[f_idx(rc.beta)].as_ref().unwrap(), img[f_idx(rc.i)].as_ref().unwrap());
            img[f_idx(rc.alpha)] = Some(sf.iter().map(|x| x / &rc.t).collect());
        }
        debug_assert_eq!(np, recipes.len() + datum.rank);
        let mut trip = Vec::new();
        for (col, v) in img.into_iter().enumerate() {
            for (row, x) in v.expect("all basis images set").into_iter().enumerate() {
                if !x.is_zero() {
                    trip.push((row, col, x));
                }
            }
        }
        Mat::from_triplets(self.dim, self.dim, trip)
    }

    /// Residual of the Jacobi identity, as the list of nonzero entries found.
    pub fn jacobi_residual(&self) -> usize {
        let n = self.dim;
        let mut bad = 0;
        let unit = |k: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); n];
            v[k] = Rational::one();
            v
        };
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket_of(&unit(a), &unit(b));
                for c in 0..n {
                    let x = self.bracket_of(&ab, &unit(c));
                    let y = self.bracket_of(&unit(b), &unit(c));
                    let y = self.bracket_of(&unit(a), &y);
                    let z = self.bracket_of(&unit(a), &unit(c));
                    let z = self.bracket_of(&unit(b), &z);
                    // [[a,b],c] = [a,[b,c]] - [b,[a,c]]
                    bad += (0..n).filter(|&k| x[k] != &y[k] - &z[k]).count();
                }
            }
        }
        bad
    }

    /// `L ∘ (P ⊗ P) = P ∘ L`.
    pub fn preserves_bracket(&self, p: &Mat<Rational>) -> bool {
        self.bracket.mul(&p.kron(p)) == p.mul(&self.bracket)
    }

    /// `Pᵀ B P = B`.
    pub fn preserves_form(&self, p: &Mat<Rational>) -> bool {
        p.transpose().mul(&self.form_b).mul(p) == self.form_b
    }

    /// `B([x,y],z) + B(y,[x,z]) = 0` for all basis triples.
    pub fn form_is_invariant(&self) -> bool {
        (0..self.dim).all(|a| {
            let ad = self.ad(a);
            let t = ad.transpose().mul(&self.form_b).add(&self.form_b.mul(&ad));
            t.is_zero()
        })
    }

    /// The rational `c` with `killing = c · B`.
    pub fn killing_ratio(&self) -> Option<Rational> {
        proportionality(&self.killing, &self.form_b)
    }
}

/// `h_α = Σ c_i (d_i / d_α) h_i` for `α = Σ c_i α_i`.
fn coroot_matrix(datum: &RootDatum, alpha: &Weight, h: &[Mat<Rational>]) -> Mat<Rational> {
    let da = int(datum.form(alpha, alpha)) / int(2);
    let mut acc = Mat::zeros(h[0].nrows(), h[0].ncols());
    for (i, hi) in h.iter().enumerate() {
        if alpha.0[i] != 0 {
            acc = acc.add(&hi.scale(&(int(alpha.0[i] * datum.d[i]) / &da)));
        }
    }
    acc
}

/// `c` with `a = c · b`, if it exists and `b ≠ 0`.
pub fn proportionality<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Option<F> {
    let (i, j, y) = b.entries().next()?;
    let c = a.get(i, j).div(y)?;
    (a == &b.scale(&c)).then_some(c)
}

/// `B(h_i, h_j) = a_ij / d_j`, `B(e_α, f_α) = B(f_α, e_α) = 2 / (α, α)`.
fn normalized_form(datum: &RootDatum, labels: &[BasisLabel]) -> Mat<Rational> {
    let n = labels.len();
    let mut trip = Vec::new();
    for (a, la) in labels.iter().enumerate() {
        for (b, lb) in labels.iter().enumerate() {
            let v = match (la, lb) {
                (BasisLabel::H(i), BasisLabel::H(j)) => int(datum.cartan[*i][*j]) / int(datum.d[*j]),
                (BasisLabel::E(x), BasisLabel::F(y)) | (BasisLabel::F(x), BasisLabel::E(y)) if x == y => {
                    int(2) / int(datum.form(x, x))
                }
                _ => continue,
            };
            trip.push((a, b, v));
        }
    }
    Mat::from_triplets(n, n, trip)
}

fn killing_form(bracket: &Mat<Rational>, dim: usize) -> Mat<Rational> {
    let ad: Vec<Mat<Rational>> = (0..dim)
        .map(|a| {
            let t = bracket
                .entries()
                .filter(|(_, k, _)| k / dim == a)
                .map(|(c, k, v)| (c, k % dim, v.clone()))
                .collect();
            Mat::from_triplets(dim, dim, t)
        })
        .collect();
    Mat::from_fn(dim, dim, |a, b| ad[a].mul(&ad[b]).trace())
}
