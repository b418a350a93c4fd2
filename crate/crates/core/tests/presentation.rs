use qpres::braiding::Braiding;
use qpres::intertwiners::{killing_composite, ClassicalTargets, FormPack};
use qpres::linalg::Mat;
use qpres::presentation::*;
use qpres::roots::{peter_weyl_dim, proportionality, CartanType, ClassicalAdjoint, RootDatum};
use qpres::scalar::{int, rat, Rational};
use qpres::tensor::TensorPower;
use qpres::uqmod::RepModule;
use qpres::{Field, Scalar};

struct Setup {
    datum: RootDatum,
    adj: ClassicalAdjoint,
    v: RepModule<Scalar>,
    br: Braiding<Scalar>,
    pack: FormPack<Scalar>,
}

fn setup(t: CartanType) -> Setup {
    let datum = RootDatum::new(t);
    let adj = ClassicalAdjoint::build(&datum).unwrap();
    let mut v = RepModule::adjoint(&datum).unwrap();
    if adj.gamma.is_some() {
        v = v.with_gamma(&adj).unwrap();
    }
    let br = Braiding::compute(&v).unwrap();
    let cl = ClassicalTargets::new(&v, &adj).unwrap();
    let pack = FormPack::build(&v, &cl).unwrap();
    Setup { datum, adj, v, br, pack }
}

impl Setup {
    fn input(&self, sel: Selector) -> PresentationInput<Scalar> {
        PresentationInput::new(self.v.weights.clone(), self.br.r.clone(), Some(self.pack.l.clone()), Some(self.pack.a.clone()), sel).unwrap()
    }

    fn at(&self, sel: Selector, q0: &Rational) -> PresentationInput<Rational> {
        self.input(sel).map(|x| x.specialize(q0)).unwrap()
    }

    fn lower(&self) -> impl Fn(usize) -> qpres::Result<u64> + '_ {
        move |d| peter_weyl_dim(&self.datum, &self.adj, self.adj.gamma.is_some(), d)
    }
}

/// Σ (2j+1)² over spins j = 0..=d: the irreducibles inside V^{⊗≤d} for the adjoint of sl2.
fn sl2_counts(d: usize) -> u64 {
    (0..=d as u64).map(|j| (2 * j + 1).pow(2)).sum()
}

fn uppers(t: &TruncatedAlgebra) -> Vec<u64> {
    t.uppers()[1..].to_vec()
}

#[test]
fn sl2_counts_oracle() {
    let s = setup(CartanType::A1);
    assert_eq!([sl2_counts(1), sl2_counts(2), sl2_counts(3)], [10, 35, 84]);
    for d in 0..=3 {
        assert_eq!(peter_weyl_dim(&s.datum, &s.adj, false, d).unwrap(), sl2_counts(d));
    }
}

#[test]
fn a1_certified_at_exact_points() {
    let s = setup(CartanType::A1);
    let lower = s.lower();
    for q0 in [int(2), rat(1, 2), int(5)] {
        let r2 = s.at(Selector::R1R2R3, &q0);
        let a = filtered_dims(&r2, 3, 4, &lower, DEFAULT_WORD_BUDGET).unwrap();
        assert!(a.certified(), "{q0}: {a:?}");
        assert_eq!(uppers(&a), vec![10, 35, 84]);

        let inv = s.at(Selector::R1R3Inv, &q0);
        let plain = filtered_dims(&inv, 1, 4, &lower, DEFAULT_WORD_BUDGET).unwrap();
        assert!(plain.certified(), "{q0}: {plain:?}");
        assert_eq!(uppers(&plain), vec![10]);

        let by_membership = Extension::from_membership(&inv, 4, DEFAULT_WORD_BUDGET).unwrap().expect("member at 4");
        let by_composite = Extension::from_composite(&inv).unwrap().expect("composite");
        // both routes imply the same rows; only the evidence differs
        let names = |e: &Extension<Rational>| e.rows.iter().map(|r| r.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&by_membership), names(&by_composite));
        let b = filtered_dims_extended(&inv, Some(&by_membership), 3, 4, &lower, DEFAULT_WORD_BUDGET).unwrap();
        assert!(b.certified(), "{q0}: {b:?}");
        assert_eq!(b.uppers(), a.uppers());
    }
}

#[test]
fn a1_certified_generically() {
    let s = setup(CartanType::A1);
    let lower = s.lower();
    let r2 = s.input(Selector::R1R2R3);
    let a = filtered_dims(&r2, 2, 3, &lower, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(uppers(&a), vec![10, 35]);
    assert!(a.certified());
    let inv = s.input(Selector::R1R3Inv);
    let plain = filtered_dims(&inv, 1, 4, &lower, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(uppers(&plain), vec![10]);
    let by_membership = Extension::from_membership(&inv, 4, DEFAULT_WORD_BUDGET).unwrap().expect("member at 4");
    assert_eq!(by_membership.evidence, Evidence::Truncated { truncation: 4 });
    let by_composite = Extension::from_composite(&inv).unwrap().expect("composite");
    for ext in [&by_membership, &by_composite] {
        let b = filtered_dims_extended(&inv, Some(ext), 2, 3, &lower, DEFAULT_WORD_BUDGET).unwrap();
        assert!(b.certified(), "{b:?}");
        assert_eq!(uppers(&b), vec![10, 35]);
    }
}

#[test]
fn truncation_only_lowers_upper_bounds() {
    let s = setup(CartanType::A1);
    let inv = s.at(Selector::R1R3Inv, &int(2));
    let lower = s.lower();
    let us: Vec<u64> = (1..=4).map(|dp| filtered_dims(&inv, 1, dp, &lower, DEFAULT_WORD_BUDGET).unwrap().uppers()[1]).collect();
    assert!(us.windows(2).all(|w| w[0] >= w[1]), "{us:?}");
    assert_eq!(us[0], 19);
    assert_eq!(us[3], 10);
    let t = filtered_dims(&inv, 1, 2, &lower, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(t.table[1].status, Some(Status::Gap));
}

#[test]
fn trivial_braiding_without_bracket_leaves_degree_one_free() {
    let s = setup(CartanType::A1);
    let n = s.v.dim();
    let inp = PresentationInput::new(s.v.weights.clone(), Mat::<Rational>::identity(n * n), None, None, Selector::R1R3Inv).unwrap();
    let t = filtered_dims(&inp, 1, 3, &s.lower(), DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(t.uppers(), vec![1, 2 * (n * n) as u64 + 1]);
}

#[test]
fn word_budget_is_enforced() {
    let s = setup(CartanType::A2);
    let inv = s.at(Selector::R1R3Inv, &int(2));
    assert!(matches!(filtered_dims(&inv, 1, 4, &s.lower(), DEFAULT_WORD_BUDGET), Err(qpres::Error::Budget(_))));
}

#[test]
fn r2_rows_in_the_truncated_ideal() {
    let s = setup(CartanType::A1);
    let inv = s.at(Selector::R1R3Inv, &int(2));
    let rep = r2_redundancy_check(&inv, 4, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(rep.verdict, Membership::Member, "{rep:?}");
    assert_eq!(rep.entries, 9);
    let mut no_l = inv.clone();
    no_l.l = None;
    let rep = r2_redundancy_check(&no_l, 4, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(rep.verdict, Membership::Inconclusive, "{rep:?}");
    assert!(Extension::from_membership(&no_l, 4, DEFAULT_WORD_BUDGET).unwrap().is_none());
}

#[test]
fn composite_is_the_killing_form_times_a() {
    for (t, ratio) in [(CartanType::A1, 4), (CartanType::A2, 6)] {
        let s = setup(t);
        let c = composite_certificate(&s.input(Selector::R1R3Inv)).unwrap().expect("composite");
        assert_eq!(c.ratio.specialize(&int(1)).unwrap(), int(ratio), "{t}");
        // the same form from the trace formula
        let kt = killing_composite(&s.pack.l, &s.br.u);
        assert_eq!(c.form, kt, "{t}");
        // ev ∘ h⁻¹ pairs x_a ⊗ x^b to (u x_a)_b
        let c0 = proportionality(&c.evaluation, &s.br.u.transpose());
        assert_eq!(c0, Some(Scalar::one()), "{t}");
    }
}

#[test]
fn a2_degree_one_at_two() {
    let s = setup(CartanType::A2);
    let inv = s.at(Selector::R1R3Inv, &int(2));
    let ext = Extension::from_composite(&inv).unwrap().expect("composite");
    assert_eq!(ext.rows.len(), 3 * 64);
    let lower = s.lower();
    let t = filtered_dims_extended(&inv, Some(&ext), 1, 2, &lower, DEFAULT_WORD_BUDGET).unwrap();
    assert!(t.certified(), "{t:?}");
    assert_eq!(t.uppers(), vec![1, 65]);
    let r2 = filtered_dims(&s.at(Selector::R1R2R3, &int(2)), 1, 2, &lower, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(r2.uppers(), t.uppers());
}

#[test]
fn coproduct_preserves_relations() {
    let s = setup(CartanType::A1);
    for sel in [Selector::R1R3Inv, Selector::R1R2R3] {
        let rep = coproduct_check(&s.input(sel)).unwrap();
        assert!(rep.failures.is_empty(), "{sel}: {:?}", rep.failures);
        assert!(rep.relations > 0);
    }
    let s = setup(CartanType::A2);
    let rep = coproduct_check(&s.at(Selector::R1R2R3, &int(2))).unwrap();
    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
}

#[test]
fn antipode_identities() {
    for t in [CartanType::A1, CartanType::A2] {
        let s = setup(t);
        let rep = antipode_identity_check(&s.v, &s.br, &s.pack).unwrap();
        assert!(rep.holds(), "{t}: {rep:?}");
        assert!(rep.evaluation_dim > 1);
    }
    let s = setup(CartanType::A1);
    let u1 = s.br.u.try_map(|x| x.specialize(&int(1))).unwrap();
    assert!(u1.is_identity());
}

/// Products of `E_i, F_i, K_i` up to length 2 acting on `V` and `V ⊗ V`, with counit.
fn u_elements(v: &RepModule<Scalar>) -> Vec<(Mat<Scalar>, Mat<Scalar>, Scalar)> {
    let t1 = TensorPower::new(v, 1);
    let t2 = TensorPower::new(v, 2);
    let mut gens = Vec::new();
    for i in 0..v.rank() {
        gens.push((t1.e[i].clone(), t2.e[i].clone(), Scalar::zero()));
        gens.push((t1.f[i].clone(), t2.f[i].clone(), Scalar::zero()));
        gens.push((t1.k[i].clone(), t2.k[i].clone(), Scalar::one()));
    }
    let mut out = vec![(Mat::identity(t1.dim), Mat::identity(t2.dim), Scalar::one())];
    out.extend(gens.iter().cloned());
    for a in &gens {
        for b in &gens {
            out.push((a.0.mul(&b.0), a.1.mul(&b.1), a.2.mul(&b.2)));
        }
    }
    out
}

/// `⟨t_ab t_cd, x⟩ = Δ(x)_{(ac),(bd)}`, `⟨t_ab, x⟩ = x_ab`, `⟨1, x⟩ = ε(x)`.
fn pair(terms: &[(Word, Scalar)], n: usize, x: &(Mat<Scalar>, Mat<Scalar>, Scalar)) -> Scalar {
    let mut acc = Scalar::zero();
    for (w, c) in terms {
        let val = match w.as_slice() {
            [] => x.2.clone(),
            [p] => x.0.get(*p as usize / n, *p as usize % n),
            [p, r] => {
                let (a, b, cc, d) = (*p as usize / n, *p as usize % n, *r as usize / n, *r as usize % n);
                x.1.get(a * n + cc, b * n + d)
            }
            _ => panic!("degree above 2"),
        };
        acc = acc.add(&c.mul(&val));
    }
    acc
}

#[test]
fn relations_vanish_on_matrix_coefficients() {
    let s = setup(CartanType::A1);
    let n = s.v.dim();
    let xs = u_elements(&s.v);
    let rels = relation_rows(&s.input(Selector::R1R2R3)).unwrap();
    assert!(rels.iter().any(|r| r.name.starts_with("R1")));
    for r in &rels {
        for x in &xs {
            assert!(Field::is_zero(&pair(&r.terms, n, x)), "{}", r.name);
        }
    }
    // a perturbed bracket breaks R3 somewhere
    let mut bad = s.input(Selector::R1R2R3);
    let l = bad.l.as_ref().unwrap();
    let (i, j, x) = l.entries().next().map(|(i, j, x)| (i, j, x.clone())).unwrap();
    bad.l = Some(l.add(&Mat::from_triplets(l.nrows(), l.ncols(), vec![(i, j, x)])));
    let rels = relation_rows(&bad).unwrap();
    assert!(rels.iter().filter(|r| r.name.starts_with("R3")).any(|r| xs.iter().any(|x| !Field::is_zero(&pair(&r.terms, n, x)))));
}

#[test]
fn inputs_must_preserve_weight() {
    let s = setup(CartanType::A1);
    let good = s.input(Selector::R1R3Inv);
    let l = good.l.clone().unwrap();
    // the highest weight vector is not a bracket of itself with itself
    let off = l.add(&Mat::from_triplets(l.nrows(), l.ncols(), vec![(0, 0, Scalar::one())]));
    let a = good.a.clone();
    assert!(matches!(
        PresentationInput::new(good.weights.clone(), good.r.clone(), Some(off), a.clone(), Selector::R1R3Inv),
        Err(qpres::Error::Check(_))
    ));
    let a_off = a.unwrap().add(&Mat::from_triplets(3, 3, vec![(0, 0, Scalar::one())]));
    assert!(PresentationInput::new(good.weights.clone(), good.r.clone(), Some(l.clone()), Some(a_off), Selector::R1R3Inv).is_err());
    let short = Mat::from_triplets(3, 3, vec![]);
    assert!(PresentationInput::new(good.weights.clone(), good.r.clone(), Some(short), None, Selector::R1R3Inv).is_err());
    assert!(PresentationInput::new(good.weights, good.r, Some(l), None, Selector::R1R3Inv).is_ok());
}

#[test]
fn specialization_commutes_with_relation_rows() {
    let s = setup(CartanType::A1);
    let q0 = rat(1, 2);
    let generic = relation_rows(&s.input(Selector::R1R3Inv)).unwrap();
    let special = relation_rows(&s.at(Selector::R1R3Inv, &q0)).unwrap();
    assert_eq!(generic.len(), special.len());
    for (g, r) in generic.iter().zip(&special) {
        assert_eq!(g.name, r.name);
        let gs: Vec<(Word, Rational)> = g.terms.iter().map(|(w, c)| (w.clone(), c.specialize(&q0).unwrap())).collect();
        assert_eq!(gs, r.terms);
    }
}
