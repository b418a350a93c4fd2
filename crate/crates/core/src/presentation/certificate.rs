//! Two routes to `TᵗAT − A ∈ I` for the `R1R3Inv` ideal `I`, and the rows it implies.
//!
//! For tensor words `s` in `V` and `V*` let `T^{(s)}` be the product of `T` and `T̃ᵗ` along
//! the legs. Maps `f` with `f T^{(s)} ≡ T^{(s')} f` modulo `I` are closed under composition,
//! `ι ⊗ f ⊗ ι` and inversion. `σR`, `L`, `i: 1 → V⊗V*` and `ev: V*⊗V → 1` are such maps by
//! the relations themselves, so a composite `V⊗V → 1` equal to `c·A`, `c ≠ 0`, gives
//! `TᵗAT = A` in the quotient.

use super::relations::Builder;
use super::{r2_redundancy_check, ModularImage, PresentationInput, Relation, Selector, Word};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::roots::proportionality;
use crate::tensor::flip;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CompositeCertificate<F> {
    /// `+1` if `h` is the mate of `σR`, `-1` for `(σR)⁻¹`.
    pub mate: i8,
    /// `e = ev ∘ h⁻¹` as the matrix `e_ab = e(x_a ⊗ x^b)`.
    pub evaluation: Mat<F>,
    /// `e (L⊗ι)(ι⊗L⊗ι)(ι⊗ι⊗i)` as a `1 × n²` row.
    pub form: Mat<F>,
    /// `form = ratio · A`.
    pub ratio: F,
}

/// `h = (ev⊗ι⊗ι)(ι⊗f⊗ι)(ι⊗ι⊗i): V*⊗V → V⊗V*`.
fn mate<F: Field>(f: &Mat<F>, n: usize) -> Mat<F> {
    let ev = Mat::from_triplets(1, n * n, (0..n).map(|a| (0, a * n + a, F::one())).collect());
    let i = ev.transpose();
    let id = Mat::identity(n);
    let cup = id.kron(&id).kron(&i);
    let mid = id.kron(f).kron(&id);
    let cap = ev.kron(&id).kron(&id);
    cap.mul(&mid).mul(&cup)
}

/// The composite of the module header, for whichever mate gives a nonzero multiple of `A`.
pub fn composite_certificate<F: Field>(input: &PresentationInput<F>) -> Result<Option<CompositeCertificate<F>>> {
    let n = input.n;
    let (Some(l), Some(a)) = (&input.l, &input.a) else {
        return Err(Error::Check("the composite needs L and A".into()));
    };
    let rhat = flip::<F>(n).mul(&input.r);
    let ev = Mat::from_triplets(1, n * n, (0..n).map(|k| (0, k * n + k, F::one())).collect());
    let i = ev.transpose();
    let id = Mat::identity(n);
    let target = super::super::intertwiners::form_row(a);
    for (sign, f) in [(1i8, rhat.clone()), (-1, rhat.inverse()?)] {
        let Ok(h_inv) = mate(&f, n).inverse() else { continue };
        let e = ev.mul(&h_inv);
        let step = id.kron(&id).kron(&i);
        let step = id.kron(l).kron(&id).mul(&step);
        let step = l.kron(&id).mul(&step);
        let form = e.mul(&step);
        if form.is_zero() {
            continue;
        }
        if let Some(ratio) = proportionality(&form, &target) {
            let evaluation = Mat::from_triplets(n, n, e.entries().map(|(_, c, x)| (c / n, c % n, x.clone())).collect());
            return Ok(Some(CompositeCertificate { mate: sign, evaluation, form, ratio }));
        }
    }
    Ok(None)
}

/// How `TᵗAT − A ∈ I` was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Evidence {
    /// Every entry reduced to zero in the ideal truncated at this word length.
    Truncated { truncation: usize },
    /// A composite of the generating intertwiners equals `ratio · A`.
    Composite { mate: i8, ratio: String },
}

/// Rows known to lie in `I`: `TᵗAT − A`, `TA⁻¹Tᵗ − A⁻¹` and `T̃ − A⁻¹TᵗA`.
#[derive(Clone, Debug)]
pub struct Extension<F> {
    pub evidence: Evidence,
    pub rows: Vec<Relation<F>>,
}

type Poly<F> = BTreeMap<Word, F>;

fn add_into<F: Field>(acc: &mut Poly<F>, terms: &[(Word, F)], c: &F, left: Option<u16>, right: Option<u16>) {
    if c.is_zero() {
        return;
    }
    for (w, x) in terms {
        let mut v: Word = Vec::with_capacity(w.len() + 2);
        v.extend(left);
        v.extend_from_slice(w);
        v.extend(right);
        let e = acc.entry(v).or_insert_with(F::zero);
        *e = e.add(&c.mul(x));
    }
}

fn clean<F: Field>(p: Poly<F>) -> Poly<F> {
    p.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Rebuild each implied row from `TᵗAT − A` and `TT̃ − 1` by multiplication with letters:
/// `T̃ − A⁻¹TᵗA = A⁻¹TᵗA (TT̃ − 1) − A⁻¹ (TᵗAT − A) T̃` and
/// `(TA⁻¹Tᵗ − A⁻¹) A = (TT̃ − 1) − T (T̃ − A⁻¹TᵗA)`.
fn derive<F: Field>(input: &PresentationInput<F>) -> Result<Vec<Relation<F>>> {
    let n = input.n;
    let nn = n * n;
    let a = input.a.as_ref().ok_or_else(|| Error::Check("R2 needs A".into()))?;
    let ai = a.inverse()?;
    let mut b = Builder::new(input);
    b.orthogonality(a);
    let orth: Vec<Relation<F>> = b.take();
    b.inverse();
    let inv: Vec<Relation<F>> = b.take().into_iter().filter(|r| r.name.starts_with("TT~")).collect();
    b.collapse(a, &ai);
    let collapse = b.take();
    b.coorthogonality(&ai);
    let coorth = b.take();
    // these builders emit rows in (i, j) order, one per entry
    if orth.len() != nn || inv.len() != nn || collapse.len() != nn || coorth.len() != nn {
        return Err(Error::Check("an implied row vanished identically".into()));
    }
    let at = |i: usize, j: usize| i * n + j;
    let t = |k: usize, l: usize| (k * n + l) as u16;
    let tt = |k: usize, l: usize| (nn + k * n + l) as u16;
    let one = F::one();
    for i in 0..n {
        for j in 0..n {
            let mut p: Poly<F> = BTreeMap::new();
            for k in 0..n {
                // (A⁻¹TᵗA)_ik = Σ A⁻¹_ia t_ba A_bk
                for (ac, x) in ai.row(i) {
                    for bb in 0..n {
                        let y = a.get(bb, k);
                        add_into(&mut p, &inv[at(k, j)].terms, &x.mul(&y), Some(t(bb, *ac as usize)), None);
                    }
                }
                for (ac, x) in ai.row(i) {
                    add_into(&mut p, &orth[at(*ac as usize, k)].terms, &x.neg(), None, Some(tt(k, j)));
                }
            }
            let want: Poly<F> = collapse[at(i, j)].terms.iter().cloned().collect();
            if clean(p) != want {
                return Err(Error::Check(format!("collapse [{i}{j}] is not the stated combination")));
            }
            let mut p: Poly<F> = BTreeMap::new();
            add_into(&mut p, &inv[at(i, j)].terms, &one, None, None);
            for k in 0..n {
                add_into(&mut p, &collapse[at(k, j)].terms, &one.neg(), Some(t(i, k)), None);
            }
            let mut q: Poly<F> = BTreeMap::new();
            for k in 0..n {
                add_into(&mut q, &coorth[at(i, k)].terms, &a.get(k, j), None, None);
            }
            if clean(p) != clean(q) {
                return Err(Error::Check(format!("coorthogonality [{i}{j}] is not the stated combination")));
            }
        }
    }
    Ok(orth.into_iter().chain(coorth).chain(collapse).collect())
}

impl<F: Field> Extension<F> {
    /// From the composite route; `None` when no mate yields a multiple of `A`.
    pub fn from_composite(input: &PresentationInput<F>) -> Result<Option<Self>> {
        let Some(c) = composite_certificate(input)? else { return Ok(None) };
        let evidence = Evidence::Composite { mate: c.mate, ratio: c.ratio.to_string() };
        Ok(Some(Extension { evidence, rows: derive(input)? }))
    }
}

impl<F: ModularImage> Extension<F> {
    /// From ideal membership at `truncation`; `None` when inconclusive there.
    pub fn from_membership(input: &PresentationInput<F>, truncation: usize, budget: u64) -> Result<Option<Self>> {
        let rep = r2_redundancy_check(input, truncation, budget)?;
        if rep.verdict != super::Membership::Member {
            return Ok(None);
        }
        Ok(Some(Extension { evidence: Evidence::Truncated { truncation }, rows: derive(input)? }))
    }
}

/// Check an input is usable for the `R1R3Inv` extension.
pub(super) fn check_selector<F>(input: &PresentationInput<F>) -> Result<()> {
    if input.selector != Selector::R1R3Inv {
        return Err(Error::Check("implied rows extend the R1R3Inv relations only".into()));
    }
    Ok(())
}
