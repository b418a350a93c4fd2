//! The R-matrix on `V ⊗ V`, the braiding `σR`, and the Drinfeld elements.
//!
//! `R = D Θ` with `D = q^{(μ,ν)}` on `V_μ ⊗ V_ν` and `Θ - 1` lowering the weight of the
//! first leg by some `β > 0` while raising the second by `β`. `Θ` is the unique such
//! operator with `R Δ(x) = Δ^{op}(x) R` for the generators.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Affine, Mat, SparseVec, Support};
use crate::roots::Weight;
use crate::tensor::{flip, TensorPower};
use crate::uqmod::RepModule;
use serde::{Deserialize, Serialize};

/// The R-matrix convention in force, recorded in every exported artifact.
pub const CONVENTION: &str = "R = q^(wt,wt) Theta, Theta - 1 lowers the first leg; Delta(E) = E(x)1 + K(x)E";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Braiding<F> {
    pub n: usize,
    pub r: Mat<F>,
    pub r_inv: Mat<F>,
    /// `σ ∘ R`.
    pub rhat: Mat<F>,
    pub rhat_inv: Mat<F>,
    pub d: Mat<F>,
    pub theta: Mat<F>,
    pub u: Mat<F>,
    pub v: Mat<F>,
    /// Number of unknowns in the Θ system, whose solution was checked to be unique.
    pub theta_unknowns: usize,
}

impl<F: Field> Braiding<F> {
    pub fn compute(v: &RepModule<F>) -> Result<Self> {
        let n = v.dim();
        let qn = v.qnum();
        let t2 = TensorPower::new(v, 2);
        let d = Mat::diagonal(
            (0..n * n).map(|k| qn.pow(v.datum.form(&v.weights[k / n], &v.weights[k % n]))).collect(),
        );
        let d_inv = Mat::diagonal((0..n * n).map(|k| d.get(k, k).inv().unwrap()).collect());
        let s = flip::<F>(n);
        let support = theta_support(&v.weights);
        let mut rhs = Vec::new();
        for x in t2.generators() {
            // (1 + N) Δ(x) = A (1 + N) with A = D⁻¹ Δ^op(x) D, i.e. A N - N Δ(x) = Δ(x) - A
            let a = d_inv.mul(&s.mul(x).mul(&s)).mul(&d);
            let c = x.sub(&a);
            rhs.push((a, x.clone(), c));
        }
        let triples: Vec<(&Mat<F>, &Mat<F>, &Mat<F>)> = rhs.iter().map(|(a, b, c)| (a, b, c)).collect();
        let nmat = match support.solve_affine(&triples) {
            Affine::Unique(m) => m,
            Affine::Inconsistent => return Err(Error::Check("no quasi-R-matrix with the chosen convention".into())),
            Affine::NotUnique(k) => {
                return Err(Error::Check(format!("quasi-R-matrix not unique: {k}-dimensional ambiguity")))
            }
        };
        let theta = Mat::identity(n * n).add(&nmat);
        let r = d.mul(&theta);
        let r_inv = r.inverse().map_err(|_| Error::Singular("R".into()))?;
        let rhat = s.mul(&r);
        let rhat_inv = r_inv.mul(&s);
        let u = drinfeld_contraction(&r, n)?;
        let vv = drinfeld_contraction(&r_inv, n)?;
        u.inverse().map_err(|_| Error::Singular("u".into()))?;
        vv.inverse().map_err(|_| Error::Singular("v".into()))?;
        Ok(Braiding { n, r, r_inv, rhat, rhat_inv, d, theta, u, v: vv, theta_unknowns: support.len() })
    }

    /// `R̂₁₂R̂₂₃R̂₁₂ - R̂₂₃R̂₁₂R̂₂₃` on `V^{⊗3}`.
    pub fn yang_baxter_residual(&self) -> Mat<F> {
        let id = Mat::identity(self.n);
        let a = self.rhat.kron(&id);
        let b = id.kron(&self.rhat);
        a.mul(&b).mul(&a).sub(&b.mul(&a).mul(&b))
    }

    /// Nonzero entries of `R̂ Δ(x) - Δ(x) R̂` summed over generators.
    pub fn intertwining_residual(&self, t2: &TensorPower<F>) -> usize {
        t2.generators().iter().map(|x| self.rhat.mul(x).sub(&x.mul(&self.rhat)).nnz()).sum()
    }

    /// Eigenvalues of `R̂` on each isotypic component of `V ⊗ V`, found among `±q^k`.
    pub fn isotypic_eigenvalues(&self, v: &RepModule<F>, exponents: std::ops::RangeInclusive<i64>) -> Result<Vec<Isotypic<F>>> {
        let t2 = TensorPower::new(v, 2);
        let qn = v.qnum();
        let mut tops: Vec<Weight> = t2.weights.clone();
        tops.sort();
        tops.dedup();
        let mut out = Vec::new();
        for w in tops {
            if !v.datum.is_dominant(&w) {
                continue;
            }
            let hw = t2.highest_vectors(&w);
            if hw.is_empty() {
                continue;
            }
            let m = restrict(&self.rhat, &hw)?;
            let mult = hw.len();
            let mut found: Vec<(F, usize)> = Vec::new();
            let mut candidates: Vec<F> = Vec::new();
            for k in exponents.clone() {
                for sgn in [1, -1] {
                    let c = qn.pow(k).mul(&F::from_i64(sgn));
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
            for c in candidates {
                let shifted = m.sub(&Mat::identity(mult).scale(&c));
                let mut p = Mat::identity(mult);
                for _ in 0..mult {
                    p = p.mul(&shifted);
                }
                let nullity = mult - p.rank();
                if nullity > 0 {
                    found.push((c, nullity));
                }
            }
            let total: usize = found.iter().map(|x| x.1).sum();
            if total != mult {
                return Err(Error::Check(format!("eigenvalues on HW_{w:?} not all of the form ±q^k")));
            }
            out.push(Isotypic { weight: w, multiplicity: mult, eigenvalues: found });
        }
        Ok(out)
    }
}

/// The action of `R̂` on one highest-weight space of `V ⊗ V`.
#[derive(Clone, Debug)]
pub struct Isotypic<F> {
    pub weight: Weight,
    pub multiplicity: usize,
    pub eigenvalues: Vec<(F, usize)>,
}

/// Pairs `((a,b),(c,d))` with `wt c - wt a = wt b - wt d = β`, `β > 0`.
fn theta_support(w: &[Weight]) -> Support {
    let n = w.len();
    Support::new(n * n, n * n, |row, col| {
        let (a, b) = (row / n, row % n);
        let (c, d) = (col / n, col % n);
        let beta = w[c].sub(&w[a]);
        !beta.is_zero() && beta.is_nonneg() && w[b].sub(&w[d]) == beta
    })
}

/// Matrix of `x` on the span of `basis`, assuming the span is invariant.
fn restrict<F: Field>(x: &Mat<F>, basis: &[SparseVec<F>]) -> Result<Mat<F>> {
    let n = x.nrows();
    let dec = crate::linalg::Decomposer::from_vectors(n, basis).map_err(|_| Error::Check("dependent basis".into()))?;
    let xt = x.transpose();
    let mut cols = Vec::new();
    for b in basis {
        // x b as a sparse vector
        let mut acc: Vec<(u32, F)> = Vec::new();
        for (k, c) in b {
            for (r, y) in xt.row(*k as usize) {
                acc.push((*r, y.mul(c)));
            }
        }
        let img = crate::linalg::sparse_from_pairs(acc);
        cols.push(dec.coordinates(&img).ok_or_else(|| Error::Check("subspace not invariant".into()))?);
    }
    let m = basis.len();
    let t = cols.into_iter().enumerate().flat_map(|(j, c)| c.into_iter().map(move |(i, x)| (i as usize, j, x))).collect();
    Ok(Mat::from_triplets(m, m, t))
}

/// Write `R = Σ a_j ⊗ b_j`, invert in `End(V)^op ⊗ End(V)` to get `Σ p_i ⊗ q_i`, and
/// return `Σ q_i p_i`.
pub fn drinfeld_contraction<F: Field>(r: &Mat<F>, n: usize) -> Result<Mat<F>> {
    // transposition of the first leg maps End(V)^op ⊗ End(V) to End(V*) ⊗ End(V)
    let x = partial_transpose_first(&partial_transpose_first(r, n).inverse().map_err(|_| {
        Error::Singular("R with the first leg transposed".into())
    })?, n);
    // X = Σ p_i ⊗ q_i, X_{(x,y),(z,w)} = (p_i)_{xz} (q_i)_{yw}; u_{ac} = Σ_b X_{(b,a),(c,b)}
    let mut t = Vec::new();
    for (row, col, val) in x.entries() {
        let (b, a) = (row / n, row % n);
        let (c, b2) = (col / n, col % n);
        if b == b2 {
            t.push((a, c, val.clone()));
        }
    }
    Ok(Mat::from_triplets(n, n, t))
}

/// `(a⊗b)^{t1}` entrywise: `X_{(x,y),(z,w)} ↦ X_{(z,y),(x,w)}`.
pub fn partial_transpose_first<F: Field>(m: &Mat<F>, n: usize) -> Mat<F> {
    let t = m
        .entries()
        .map(|(row, col, v)| {
            let (x, y) = (row / n, row % n);
            let (z, w) = (col / n, col % n);
            (z * n + y, x * n + w, v.clone())
        })
        .collect();
    Mat::from_triplets(n * n, n * n, t)
}
