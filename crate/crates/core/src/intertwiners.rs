//! Module maps between tensor powers of `V`, and the normalized bracket and forms.
//!
//! Morphisms `V^{⊗m} → V^{⊗n}` are `dim^n × dim^m` matrices; `V^{⊗0}` is the trivial
//! module. Normalization over ℚ(q): divide by the Laurent content, then rescale by the
//! rational that makes the `q = 1` limit equal the classical tensor under `φ`.

use crate::braiding::Braiding;
use crate::error::{Error, Result};
use crate::field::{Field, Specialize};
use crate::linalg::{Echelon, Mat, Support};
use crate::roots::{proportionality, ClassicalAdjoint};
use crate::scalar::{int, laurent_content, Rational, Scalar};
use crate::tensor::{flip, lift, TensorPower};
use crate::uqmod::{identify_classical, RelationResidual, RepModule};
use serde::{Deserialize, Serialize};

/// Default ceiling on `dim(V)^{m+n}` for a Hom solve.
pub const DEFAULT_BUDGET: usize = 1 << 16;

/// Basis of `Hom_U(V^{⊗m}, V^{⊗n})`, or of its Γ-invariant part when `gamma` is set
/// and `V` carries a diagram involution.
pub fn hom_space<F: Field>(v: &RepModule<F>, m: usize, n: usize, gamma: bool, budget: usize) -> Result<Vec<Mat<F>>> {
    let size = v.dim().pow((m + n) as u32);
    if size > budget {
        return Err(Error::Budget(format!("Hom(V^{m}, V^{n}) has {size} entries, budget {budget}")));
    }
    let src = TensorPower::new(v, m);
    let dst = TensorPower::new(v, n);
    let support = Support::graded(&dst.weights, &src.weights);
    let mut pairs = Vec::new();
    for i in 0..v.rank() {
        pairs.push((&dst.e[i], &src.e[i]));
        pairs.push((&dst.f[i], &src.f[i]));
    }
    let sol = support.solve(&pairs);
    match (gamma, &src.gamma, &dst.gamma) {
        (true, Some(ps), Some(pd)) => Ok(gamma_average(&sol, pd, ps)),
        _ => Ok(sol),
    }
}

/// Image of the projector `X ↦ (X + P_n X P_m) / 2` on the span of `basis`.
pub fn gamma_average<F: Field>(basis: &[Mat<F>], p_dst: &Mat<F>, p_src: &Mat<F>) -> Vec<Mat<F>> {
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for x in basis {
        let y = x.add(&p_dst.mul(x).mul(p_src));
        if ech.insert(&y.vectorize()).is_some() {
            out.push(y);
        }
    }
    out
}

/// Classical fusion count `dim Hom_g(g^{⊗m}, g^{⊗n})`.
pub fn classical_hom_dim(datum: &crate::roots::RootDatum, m: usize, n: usize) -> Result<u64> {
    let th = datum.dynkin_labels(&datum.max_root);
    let a = datum.tensor_power(&th, m)?;
    let b = datum.tensor_power(&th, n)?;
    Ok(a.iter().map(|(w, x)| x * b.get(w).copied().unwrap_or(0)).sum())
}

/// `x / c` with `c` the Laurent content of `x`.
pub fn content_normalize(x: &Mat<Scalar>) -> Result<(Mat<Scalar>, Scalar)> {
    let c = laurent_content(x.entries().map(|(_, _, v)| v))?;
    let ci = c.inv()?;
    Ok((x.scale(&ci), c))
}

/// How a normalized morphism was obtained from a raw solution `X`: `X / (content · rescale)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Normalization {
    pub content: Scalar,
    pub rescale: Rational,
}

/// The tensors `L_q, B_q, B'_q, L'_q` and the matrix `A_q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormPack<F> {
    pub n: usize,
    /// `n × n²`.
    pub l: Mat<F>,
    /// `1 × n²`.
    pub b: Mat<F>,
    /// `A_{kl} = B(x_k ⊗ x_l)`.
    pub a: Mat<F>,
    pub a_inv: Mat<F>,
    /// `n² × 1`, `Σ (A^{-1})_{kl} x_k ⊗ x_l`.
    pub b_dual: Mat<F>,
    /// `n² × n`, normalized independently from the Γ-invariant `Hom(V, V⊗V)`.
    pub l_dual: Mat<F>,
    /// `n² × n`, the adjoint of `L` for `B` on `V` and `B^{(2)}` on `V⊗V`.
    pub l_adjoint: Mat<F>,
    /// `l_dual = ratio · l_adjoint`.
    pub ratio: F,
    pub normalization: Option<PackNormalization>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackNormalization {
    pub l: Normalization,
    pub b: Normalization,
    pub l_dual: Normalization,
}

/// Everything classical the normalizations compare against, transported to the basis of `V`.
pub struct ClassicalTargets {
    pub phi: Mat<Rational>,
    pub bracket: Mat<Rational>,
    pub form: Mat<Rational>,
    pub killing: Mat<Rational>,
}

impl ClassicalTargets {
    pub fn new(v: &RepModule<Scalar>, adj: &ClassicalAdjoint) -> Result<Self> {
        let v1 = v.at(&int(1))?;
        let phi = identify_classical(&v1, adj)?;
        let phi_inv = phi.inverse()?;
        let bracket = phi_inv.mul(&adj.bracket).mul(&phi.kron(&phi));
        let form = phi.transpose().mul(&adj.form_b).mul(&phi);
        let killing = phi.transpose().mul(&adj.killing).mul(&phi);
        Ok(ClassicalTargets { phi, bracket, form, killing })
    }
}

/// `A` as a `1 × n²` row.
pub fn form_row<F: Field>(a: &Mat<F>) -> Mat<F> {
    let n = a.nrows();
    Mat::from_triplets(1, n * n, a.entries().map(|(k, l, x)| (0, k * n + l, x.clone())).collect())
}

/// The `1 × n²` row as the matrix `A`.
pub fn form_matrix<F: Field>(b: &Mat<F>, n: usize) -> Mat<F> {
    Mat::from_triplets(n, n, b.entries().map(|(_, c, x)| (c / n, c % n, x.clone())).collect())
}

/// `L† = (G₂ᵀ)⁻¹ Lᵀ Aᵀ` with `G₂ = (A ⊗ A) σ` the Gram matrix of `B^{(2)}`.
pub fn bracket_adjoint<F: Field>(l: &Mat<F>, a: &Mat<F>) -> Result<Mat<F>> {
    let n = a.nrows();
    let g2 = a.kron(a).mul(&flip(n));
    Ok(g2.transpose().inverse()?.mul(&l.transpose()).mul(&a.transpose()))
}

/// Unique Γ-invariant line of `Hom(V^{⊗m}, V^{⊗n})`, normalized against `target` at `q = 1`.
fn normalized_line(v: &RepModule<Scalar>, m: usize, n: usize, target: &Mat<Rational>, what: &str) -> Result<(Mat<Scalar>, Normalization)> {
    let hom = hom_space(v, m, n, true, DEFAULT_BUDGET)?;
    if hom.len() != 1 {
        return Err(Error::Dimension { what: format!("Γ-invariant Hom for {what}"), expected: 1, found: hom.len() });
    }
    let (x, content) = content_normalize(&hom[0])?;
    let one = int(1);
    let x1 = x.try_map(|s| s.specialize(&one))?;
    if x1.is_zero() {
        return Err(Error::Check(format!("{what} vanishes at q = 1 after content normalization")));
    }
    let c = proportionality(&x1, target)
        .ok_or_else(|| Error::Check(format!("{what} at q = 1 is not proportional to its classical counterpart")))?;
    let ci = Field::inv(&c).ok_or_else(|| Error::Check(format!("{what}: zero classical counterpart")))?;
    let out = x.scale(&Scalar::from_rational(ci));
    Ok((out, Normalization { content, rescale: c }))
}

impl FormPack<Scalar> {
    /// Build and normalize the pack over ℚ(q). `v` must carry its Γ-action when Γ ≠ 1.
    pub fn build(v: &RepModule<Scalar>, cl: &ClassicalTargets) -> Result<Self> {
        let n = v.dim();
        let (l, nl) = normalized_line(v, 2, 1, &cl.bracket, "L_q")?;
        let (b, nb) = normalized_line(v, 2, 0, &form_row(&cl.form), "B_q")?;
        let a = form_matrix(&b, n);
        let a_inv = a.inverse().map_err(|_| Error::Singular("A_q".into()))?;
        let b_dual = form_row(&a_inv).transpose();
        let one = int(1);
        let l_adj1 = bracket_adjoint(&cl.bracket, &cl.form)?;
        let (l_dual, nd) = normalized_line(v, 1, 2, &l_adj1, "L'_q")?;
        let l_adjoint = bracket_adjoint(&l, &a)?;
        let ratio = proportionality(&l_dual, &l_adjoint)
            .ok_or_else(|| Error::Check("L'_q is not a multiple of the adjoint of L_q".into()))?;
        if ratio.specialize(&one)? != one {
            return Err(Error::Check(format!("L'_q / L_q† = {ratio} is not 1 at q = 1")));
        }
        Ok(FormPack {
            n,
            l,
            b,
            a,
            a_inv,
            b_dual,
            l_dual,
            l_adjoint,
            ratio,
            normalization: Some(PackNormalization { l: nl, b: nb, l_dual: nd }),
        })
    }

    pub fn specialize<G: Field>(&self, s: &impl Specialize<G>) -> Result<FormPack<G>> {
        let f = |m: &Mat<Scalar>| m.try_map(|x| s.apply(x));
        let a = f(&self.a)?;
        Ok(FormPack {
            n: self.n,
            l: f(&self.l)?,
            b: f(&self.b)?,
            a_inv: a.inverse().map_err(|_| Error::Singular("A_q at the specialization".into()))?,
            a,
            b_dual: f(&self.b_dual)?,
            l_dual: f(&self.l_dual)?,
            l_adjoint: f(&self.l_adjoint)?,
            ratio: s.apply(&self.ratio)?,
            normalization: self.normalization.clone(),
        })
    }
}

impl<F: Field> FormPack<F> {
    /// Named morphisms with their arities, as `(name, source, target, matrix)`.
    pub fn morphisms<'a>(&'a self, br: &'a Braiding<F>) -> Vec<(&'static str, usize, usize, &'a Mat<F>)> {
        vec![
            ("sigma R", 2, 2, &br.rhat),
            ("(sigma R)^-1", 2, 2, &br.rhat_inv),
            ("B", 2, 0, &self.b),
            ("B'", 0, 2, &self.b_dual),
            ("L", 2, 1, &self.l),
            ("L'", 1, 2, &self.l_dual),
        ]
    }

    /// `B^{(2)}(x⊗y, z⊗w) = B(x⊗w) B(y⊗z)` as a map `V^{⊗4} → 1`.
    pub fn doubled_form(&self) -> Mat<F> {
        let id = Mat::identity(self.n);
        self.b.mul(&id.kron(&self.b).kron(&id))
    }
}

/// Intertwining residuals of a morphism `V^{⊗m} → V^{⊗n}`, Γ included when present.
pub fn morphism_residual<F: Field>(v: &RepModule<F>, m: usize, n: usize, x: &Mat<F>) -> usize {
    let src = TensorPower::new(v, m);
    let dst = TensorPower::new(v, n);
    let mut bad = 0;
    for i in 0..v.rank() {
        for (a, b) in [(&dst.e[i], &src.e[i]), (&dst.f[i], &src.f[i]), (&dst.k[i], &src.k[i])] {
            bad += a.mul(x).sub(&x.mul(b)).nnz();
        }
    }
    if let (Some(pd), Some(ps)) = (&dst.gamma, &src.gamma) {
        bad += pd.mul(x).sub(&x.mul(ps)).nnz();
    }
    bad
}

/// Every generating morphism is an intertwiner; each holds exactly when the corresponding
/// relation holds among matrix coefficients.
pub fn verify_relations<F: Field>(v: &RepModule<F>, br: &Braiding<F>, pack: &FormPack<F>) -> Vec<RelationResidual> {
    let mut out: Vec<RelationResidual> = pack
        .morphisms(br)
        .into_iter()
        .map(|(name, m, n, x)| RelationResidual { name: format!("{name} is a module map"), nonzero: morphism_residual(v, m, n, x) })
        .collect();
    out.push(RelationResidual { name: "B^(2) is a module map".into(), nonzero: morphism_residual(v, 4, 0, &pack.doubled_form()) });
    let id = Mat::<F>::identity(v.dim());
    let zig = pack.b.kron(&id).mul(&id.kron(&pack.b_dual));
    out.push(RelationResidual { name: "(B ⊗ 1)(1 ⊗ B') = 1".into(), nonzero: zig.sub(&id).nnz() });
    let zag = id.kron(&pack.b).mul(&pack.b_dual.kron(&id));
    out.push(RelationResidual { name: "(1 ⊗ B)(B' ⊗ 1) = 1".into(), nonzero: zag.sub(&id).nnz() });
    out
}

/// `B̃(x ⊗ y) = Tr(u ad_L(x) ad_L(y))`, the composite `e(L⊗ι)(ι⊗L⊗ι)(ι⊗ι⊗i)`.
pub fn killing_composite<F: Field>(l: &Mat<F>, u: &Mat<F>) -> Mat<F> {
    let n = l.nrows();
    let ad: Vec<Mat<F>> = (0..n)
        .map(|x| Mat::from_triplets(n, n, l.entries().filter(|(_, k, _)| k / n == x).map(|(c, k, y)| (c, k % n, y.clone())).collect()))
        .collect();
    let uad: Vec<Mat<F>> = ad.iter().map(|a| u.mul(a)).collect();
    let mut t = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let v = uad[x].mul(&ad[y]).trace();
            if !v.is_zero() {
                t.push((0, x * n + y, v));
            }
        }
    }
    Mat::from_triplets(1, n * n, t)
}

/// Outcome of a depth-limited spanning test for one `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanResult {
    pub source: usize,
    pub target: usize,
    pub hom_dim: usize,
    pub span_dim: usize,
    pub depth: usize,
    pub max_legs: usize,
    pub spans: bool,
}

/// Spans of all composites of `ι^{⊗a} ⊗ f ⊗ ι^{⊗b}` applied to `id_{V^{⊗m}}`, by depth, with
/// intermediate tensor powers limited to `max_legs` factors. Returns the basis per target arity.
pub fn composite_spans<F: Field>(
    n: usize,
    gens: &[(&str, usize, usize, &Mat<F>)],
    m: usize,
    depth: usize,
    max_legs: usize,
) -> Vec<Vec<Mat<F>>> {
    let mut spans: Vec<(Echelon<F>, Vec<Mat<F>>)> = (0..=max_legs).map(|_| (Echelon::new(), Vec::new())).collect();
    let id = Mat::identity(n.pow(m as u32));
    spans[m].0.insert(&id.vectorize());
    spans[m].1.push(id.clone());
    let mut frontier: Vec<(usize, Mat<F>)> = vec![(m, id)];
    let mut lifted: std::collections::HashMap<(usize, usize, usize), Mat<F>> = std::collections::HashMap::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for (k, g) in &frontier {
            for (gi, (_, a, b, f)) in gens.iter().enumerate() {
                if *a > *k || k - a + b > max_legs {
                    continue;
                }
                for p in 0..=(k - a) {
                    let lf = lifted.entry((gi, p, *k)).or_insert_with(|| lift(n, p, f, k - a - p));
                    let h = lf.mul(g);
                    let t = k - a + b;
                    if h.is_zero() {
                        continue;
                    }
                    if spans[t].0.insert(&h.vectorize()).is_some() {
                        spans[t].1.push(h.clone());
                        next.push((t, h));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    spans.into_iter().map(|(_, b)| b).collect()
}

/// Compare composite spans with `Hom` dimensions for every listed `(m, n)`.
pub fn spanning_check<F: Field>(
    v: &RepModule<F>,
    br: &Braiding<F>,
    pack: &FormPack<F>,
    pairs: &[(usize, usize)],
    depth: usize,
    max_legs: usize,
    hom_dims: &dyn Fn(usize, usize) -> Result<usize>,
) -> Result<Vec<SpanResult>> {
    // σR is invertible on V⊗V, so its inverse is a polynomial in it and not a generator
    let gens: Vec<_> = pack.morphisms(br).into_iter().filter(|g| g.0 != "(sigma R)^-1").collect();
    let mut out = Vec::new();
    let mut sources: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    sources.sort();
    sources.dedup();
    for m in sources {
        let legs = pairs.iter().filter(|p| p.0 == m).map(|p| p.1).max().unwrap().max(m).max(max_legs);
        let spans = composite_spans(v.dim(), &gens, m, depth, legs);
        for &(mm, nn) in pairs.iter().filter(|p| p.0 == m) {
            let h = hom_dims(mm, nn)?;
            let s = spans[nn].len();
            if s > h {
                return Err(Error::Check(format!("composites exceed Hom({mm},{nn}): {s} > {h}")));
            }
            out.push(SpanResult { source: mm, target: nn, hom_dim: h, span_dim: s, depth, max_legs: legs, spans: s == h });
        }
    }
    Ok(out)
}
