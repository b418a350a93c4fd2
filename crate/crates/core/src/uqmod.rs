//! The simple module `V_λ` of `U_q(g)` with explicit generator matrices, its
//! specializations, the diagram-automorphism action and the identification with the
//! classical adjoint at `q = 1`.

use crate::error::{Error, Result};
use crate::field::{AtRational, Field, Specialize};
use crate::hwmodule::{self, Quantum};
use crate::linalg::{Mat, Support};
use crate::roots::{ClassicalAdjoint, GammaGroup, RootDatum, Weight};
use crate::scalar::{Rational, Scalar};
use serde::{Deserialize, Serialize};

/// Powers of a fixed nonzero `q` and the q-numbers built from them, in any field.
#[derive(Clone, Debug)]
pub struct QNum<F> {
    q: F,
    qinv: F,
}

impl<F: Field> QNum<F> {
    pub fn new(q: F) -> Result<Self> {
        let qinv = q.inv().ok_or(Error::ZeroSpecialization)?;
        Ok(QNum { q, qinv })
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn pow(&self, e: i64) -> F {
        if e >= 0 {
            self.q.pow(e).unwrap()
        } else {
            self.qinv.pow(-e).unwrap()
        }
    }

    /// `[n]_{q^d}` as the finite sum `Σ q^{d(n-1-2k)}`, valid at every nonzero `q`.
    pub fn qint(&self, n: i64, d: i64) -> F {
        let m = n.abs();
        let mut acc = F::zero();
        for k in 0..m {
            acc = acc.add(&self.pow(d * (m - 1 - 2 * k)));
        }
        if n < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    /// Gaussian binomial `[n choose k]_{q^d}` by the q-Pascal rule.
    pub fn qbinom(&self, n: i64, k: i64, d: i64) -> F {
        if k < 0 || k > n {
            return F::zero();
        }
        let mut row = vec![F::one()];
        for m in 1..=n {
            let mut next = vec![F::one(); (m + 1) as usize];
            for j in 1..m {
                let a = self.pow(-d * j).mul(&row[j as usize]);
                let b = self.pow(d * (m - j)).mul(&row[(j - 1) as usize]);
                next[j as usize] = a.add(&b);
            }
            row = next;
        }
        row[k as usize].clone()
    }
}

impl<F: Field> hwmodule::Deformation<F> for QNum<F> {
    fn qint(&self, n: i64, d: i64) -> F {
        QNum::qint(self, n, d)
    }
    fn qpow(&self, e: i64) -> F {
        self.pow(e)
    }
}

/// The diagram involution acting on `V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaAction<F> {
    pub perm: Vec<usize>,
    /// Sign on the highest-weight line.
    pub chi: i8,
    pub p: Mat<F>,
}

/// A weight module with generator matrices `E_i, F_i, K_i^{±1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepModule<F> {
    pub datum: RootDatum,
    pub highest_weight: Weight,
    /// The value of `q` in the coefficient field.
    pub q: F,
    pub weights: Vec<Weight>,
    /// Basis vector `b` is `F_{w[0]} F_{w[1]} … ξ` for `w = words[b]`.
    pub words: Vec<Vec<usize>>,
    pub e: Vec<Mat<F>>,
    pub f: Vec<Mat<F>>,
    pub k: Vec<Mat<F>>,
    pub k_inv: Vec<Mat<F>>,
    pub highest: usize,
    pub gamma: Option<GammaAction<F>>,
}

/// A named defining relation and the number of nonzero entries of its residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationResidual {
    pub name: String,
    pub nonzero: usize,
}

impl RepModule<Scalar> {
    /// `V_λ` over ℚ(q); λ must be dominant and in the root lattice.
    pub fn build(datum: &RootDatum, lambda: &Weight) -> Result<Self> {
        let hw = hwmodule::build::<Scalar, _>(datum, lambda, &Quantum)?;
        let qn = QNum::new(Scalar::q())?;
        let m = Self::assemble(datum, lambda, &qn, hw);
        if let Some((name, x)) = m.first_entry_singular_at(&Rational::from_integer(1.into())) {
            return Err(Error::Check(format!("{name} has entry {x} singular at q = 1")));
        }
        Ok(m)
    }

    /// The adjoint module `V_{α_max}`.
    pub fn adjoint(datum: &RootDatum) -> Result<Self> {
        Self::build(datum, &datum.max_root)
    }

    /// Some generator entry with a pole at `q0`, if any.
    pub fn first_entry_singular_at(&self, q0: &Rational) -> Option<(String, Scalar)> {
        for (name, m) in self.named_matrices() {
            if let Some((_, _, x)) = m.entries().find(|(_, _, x)| !x.regular_at(q0)) {
                return Some((name, x.clone()));
            }
        }
        None
    }

    pub fn is_regular_at(&self, q0: &Rational) -> bool {
        self.first_entry_singular_at(q0).is_none()
    }

    /// Image under a ring homomorphism of the coefficients.
    pub fn specialize<G: Field>(&self, s: &impl Specialize<G>) -> Result<RepModule<G>> {
        let m = self;
        let f = |x: &Mat<Scalar>| x.try_map(|y| s.apply(y));
        let all = |v: &[Mat<Scalar>]| v.iter().map(f).collect::<Result<Vec<_>>>();
        Ok(RepModule {
            datum: m.datum.clone(),
            highest_weight: m.highest_weight.clone(),
            q: s.apply(&m.q)?,
            weights: m.weights.clone(),
            words: m.words.clone(),
            e: all(&m.e)?,
            f: all(&m.f)?,
            k: all(&m.k)?,
            k_inv: all(&m.k_inv)?,
            highest: m.highest,
            gamma: match &m.gamma {
                Some(g) => Some(GammaAction { perm: g.perm.clone(), chi: g.chi, p: f(&g.p)? }),
                None => None,
            },
        })
    }

    /// Evaluate `q -> q0` in ℚ.
    pub fn at(&self, q0: &Rational) -> Result<RepModule<Rational>> {
        self.specialize(&AtRational(q0.clone()))
    }

    /// Attach the action of the diagram involution, choosing the sign on ξ so that the
    /// `q = 1` limit is a Lie algebra automorphism of the classical adjoint.
    pub fn with_gamma(mut self, adj: &ClassicalAdjoint) -> Result<Self> {
        let Some(perm) = GammaGroup::of(self.datum.cartan_type).involution else {
            return Ok(self);
        };
        let p = self.gamma_matrix(&perm);
        let one = Rational::from_integer(1.into());
        let v1 = self.at(&one)?;
        let phi = identify_classical(&v1, adj)?;
        let t = phi.mul(&p.try_map(|x| x.specialize(&one))?).mul(&phi.inverse()?);
        let chi = if adj.preserves_bracket(&t) {
            1
        } else if adj.preserves_bracket(&t.neg()) {
            -1
        } else {
            return Err(Error::Check("no sign makes the diagram involution a classical automorphism".into()));
        };
        let p = if chi == 1 { p } else { p.neg() };
        self.gamma = Some(GammaAction { perm, chi, p });
        let bad = self.gamma_residuals();
        if let Some(r) = bad.iter().find(|r| r.nonzero != 0) {
            return Err(Error::Check(format!("diagram involution fails {}", r.name)));
        }
        Ok(self)
    }
}

impl<F: Field> RepModule<F> {
    fn assemble(datum: &RootDatum, lambda: &Weight, qn: &QNum<F>, hw: hwmodule::HwModule<F>) -> Self {
        let r = datum.rank;
        let mut k = Vec::with_capacity(r);
        let mut k_inv = Vec::with_capacity(r);
        for i in 0..r {
            let ai = datum.simple_root(i);
            let ex: Vec<i64> = hw.weights.iter().map(|w| datum.form(w, &ai)).collect();
            k.push(Mat::diagonal(ex.iter().map(|&x| qn.pow(x)).collect()));
            k_inv.push(Mat::diagonal(ex.iter().map(|&x| qn.pow(-x)).collect()));
        }
        RepModule {
            datum: datum.clone(),
            highest_weight: lambda.clone(),
            q: qn.q().clone(),
            weights: hw.weights,
            words: hw.words,
            e: hw.e,
            f: hw.f,
            k,
            k_inv,
            highest: 0,
            gamma: None,
        }
    }

    /// Build directly over `F` at a given nonzero `q`.
    pub fn build_at(datum: &RootDatum, lambda: &Weight, q: F) -> Result<Self> {
        let qn = QNum::new(q)?;
        let hw = hwmodule::build::<F, _>(datum, lambda, &qn)?;
        Ok(Self::assemble(datum, lambda, &qn, hw))
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn qnum(&self) -> QNum<F> {
        QNum::new(self.q.clone()).expect("q is nonzero")
    }

    /// Human-readable basis label, e.g. `F2 F1 ξ`.
    pub fn label(&self, b: usize) -> String {
        let mut s: Vec<String> = self.words[b].iter().map(|i| format!("F{}", i + 1)).collect();
        s.push("ξ".into());
        s.join(" ")
    }

    pub fn named_matrices(&self) -> Vec<(String, &Mat<F>)> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            out.push((format!("E{}", i + 1), &self.e[i]));
            out.push((format!("F{}", i + 1), &self.f[i]));
            out.push((format!("K{}", i + 1), &self.k[i]));
            out.push((format!("K{}^-1", i + 1), &self.k_inv[i]));
        }
        if let Some(g) = &self.gamma {
            out.push(("P".into(), &g.p));
        }
        out
    }

    /// The vector `F_{w[0]} … F_{w[last]} ξ`.
    pub fn apply_word(&self, word: &[usize]) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[self.highest] = F::one();
        for &i in word.iter().rev() {
            v = self.f[i].mul_vec(&v);
        }
        v
    }

    /// `P(F_w ξ) = F_{γ(w)} ξ` with sign `+1` on ξ.
    fn gamma_matrix(&self, perm: &[usize]) -> Mat<F> {
        let n = self.dim();
        let mut t = Vec::new();
        for (b, w) in self.words.iter().enumerate() {
            let gw: Vec<usize> = w.iter().map(|&i| perm[i]).collect();
            for (r, x) in self.apply_word(&gw).into_iter().enumerate() {
                if !x.is_zero() {
                    t.push((r, b, x));
                }
            }
        }
        Mat::from_triplets(n, n, t)
    }

    /// Residuals of `P X P^{-1} = α_γ(X)` on generators and of `P^2 = 1`.
    pub fn gamma_residuals(&self) -> Vec<RelationResidual> {
        let Some(g) = &self.gamma else { return Vec::new() };
        let mut out = Vec::new();
        let p = &g.p;
        for i in 0..self.rank() {
            let j = g.perm[i];
            for (name, a, b) in [("E", &self.e[i], &self.e[j]), ("F", &self.f[i], &self.f[j]), ("K", &self.k[i], &self.k[j])] {
                out.push(RelationResidual {
                    name: format!("P {name}{} = {name}{} P", i + 1, j + 1),
                    nonzero: p.mul(a).sub(&b.mul(p)).nnz(),
                });
            }
        }
        out.push(RelationResidual { name: "P^2 = 1".into(), nonzero: p.mul(p).sub(&Mat::identity(self.dim())).nnz() });
        let c = F::from_i64(g.chi as i64);
        let pxi = p.get(self.highest, self.highest);
        out.push(RelationResidual { name: "P ξ = χ ξ".into(), nonzero: usize::from(pxi != c) });
        out
    }

    /// Residuals of every defining relation of `U_q(g)`, quantum Serre included.
    pub fn relation_residuals(&self) -> Vec<RelationResidual> {
        let qn = self.qnum();
        let r = self.rank();
        let n = self.dim();
        let a = &self.datum.cartan;
        let d = &self.datum.d;
        let id = Mat::<F>::identity(n);
        let mut out = Vec::new();
        let mut push = |name: String, m: Mat<F>| out.push(RelationResidual { name, nonzero: m.nnz() });
        for i in 0..r {
            push(format!("K{0} K{0}^-1 = 1", i + 1), self.k[i].mul(&self.k_inv[i]).sub(&id));
            for j in 0..r {
                let c = qn.pow(d[i] * a[i][j]);
                let ci = qn.pow(-d[i] * a[i][j]);
                push(format!("K{} K{} = K{1} K{0}", i + 1, j + 1), self.k[i].mul(&self.k[j]).sub(&self.k[j].mul(&self.k[i])));
                push(
                    format!("K{} E{} K{0}^-1 = q^{} E{1}", i + 1, j + 1, d[i] * a[i][j]),
                    self.k[i].mul(&self.e[j]).mul(&self.k_inv[i]).sub(&self.e[j].scale(&c)),
                );
                push(
                    format!("K{} F{} K{0}^-1 = q^{} F{1}", i + 1, j + 1, -d[i] * a[i][j]),
                    self.k[i].mul(&self.f[j]).mul(&self.k_inv[i]).sub(&self.f[j].scale(&ci)),
                );
                let comm = self.e[i].mul(&self.f[j]).sub(&self.f[j].mul(&self.e[i]));
                if i == j {
                    // (K_i - K_i^{-1}) / (q_i - q_i^{-1}) acts on weight μ by [⟨μ, α_i^∨⟩]_{q_i}
                    let h = Mat::diagonal(
                        self.weights.iter().map(|w| qn.qint(self.datum.coroot_pairing(w, i), d[i])).collect(),
                    );
                    let kk = self.k[i].sub(&self.k_inv[i]);
                    let den = qn.pow(d[i]).sub(&qn.pow(-d[i]));
                    push(format!("[E{0}, F{0}] = [H{0}]", i + 1), comm.sub(&h));
                    push(format!("(q_{0} - q_{0}^-1)[E{0}, F{0}] = K{0} - K{0}^-1", i + 1), comm.scale(&den).sub(&kk));
                } else {
                    push(format!("[E{}, F{}] = 0", i + 1, j + 1), comm);
                    let m = 1 - a[i][j];
                    for (name, x) in [("E", &self.e), ("F", &self.f)] {
                        let mut acc = Mat::zeros(n, n);
                        let pw = |k: i64| (0..k).fold(Mat::identity(n), |p: Mat<F>, _| p.mul(&x[i]));
                        for k in 0..=m {
                            let mut c = qn.qbinom(m, k, d[i]);
                            if k % 2 == 1 {
                                c = c.neg();
                            }
                            acc = acc.add(&pw(m - k).mul(&x[j]).mul(&pw(k)).scale(&c));
                        }
                        push(format!("quantum Serre {name}{} {name}{}", i + 1, j + 1), acc);
                    }
                }
            }
        }
        for i in 0..r {
            let ai = self.datum.simple_root(i);
            let raise = self.e[i].entries().all(|(x, y, _)| self.weights[x] == self.weights[y].add(&ai));
            let lower = self.f[i].entries().all(|(x, y, _)| self.weights[x] == self.weights[y].sub(&ai));
            out.push(RelationResidual { name: format!("E{} raises, F{0} lowers by α{0}", i + 1), nonzero: usize::from(!(raise && lower)) });
            let top = (0..n).filter(|&x| !self.e[i].get(x, self.highest).is_zero()).count();
            out.push(RelationResidual { name: format!("E{} ξ = 0", i + 1), nonzero: top });
        }
        out
    }

    pub fn relations_hold(&self) -> bool {
        self.relation_residuals().iter().all(|r| r.nonzero == 0) && self.gamma_residuals().iter().all(|r| r.nonzero == 0)
    }

    /// Dimension of each weight space.
    pub fn weight_multiplicities(&self) -> std::collections::BTreeMap<Weight, u64> {
        let mut m = std::collections::BTreeMap::new();
        for w in &self.weights {
            *m.entry(w.clone()).or_insert(0) += 1;
        }
        m
    }
}

/// The isomorphism `φ: V|_{q=1} → g` with `φ(ξ) = e_{α_max}`, found by solving the
/// intertwining equations against `ad e_i` and `ad f_i`.
pub fn identify_classical(v1: &RepModule<Rational>, adj: &ClassicalAdjoint) -> Result<Mat<Rational>> {
    let datum = &v1.datum;
    if v1.highest_weight != datum.max_root || v1.dim() != adj.dim {
        return Err(Error::Check("identification needs the adjoint module".into()));
    }
    let one = Rational::from_integer(1.into());
    if v1.q != one {
        return Err(Error::Check("identification needs q = 1".into()));
    }
    let support = Support::graded(&adj.weights(datum.rank), &v1.weights);
    let (ae, af): (Vec<_>, Vec<_>) = (0..datum.rank).map(|i| (adj.ad_e(datum, i), adj.ad_f(datum, i))).unzip();
    let mut pairs = Vec::new();
    for i in 0..datum.rank {
        pairs.push((&ae[i], &v1.e[i]));
        pairs.push((&af[i], &v1.f[i]));
    }
    let sol = support.solve(&pairs);
    if sol.len() != 1 {
        return Err(Error::Dimension { what: "Hom(V_1, g)".into(), expected: 1, found: sol.len() });
    }
    let top = adj.index_of(&crate::roots::BasisLabel::E(datum.max_root.clone()));
    let x = sol[0].get(top, v1.highest);
    let c = x.inv().ok_or_else(|| Error::Check("φ(ξ) has no e_θ component".into()))?;
    let phi = sol[0].scale(&c);
    phi.inverse()?;
    Ok(phi)
}
