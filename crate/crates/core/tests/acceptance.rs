//! One line per acceptance criterion, all checks exact.

use qpres::braiding::Braiding;
use qpres::field::{AtRational, Fp, ModP};
use qpres::intertwiners::*;
use qpres::linalg::Mat;
use qpres::presentation::*;
use qpres::roots::{peter_weyl_dim, proportionality, CartanType, ClassicalAdjoint, RootDatum};
use qpres::scalar::{int, rat, Rational};
use qpres::tensor::{flip, TensorPower};
use qpres::uqmod::RepModule;
use qpres::{Field, Scalar};
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($c:expr, $($m:tt)+) => {
        if !$c {
            return Err(format!($($m)+));
        }
    };
}

fn ok<T>(r: qpres::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Setup {
    t: CartanType,
    datum: RootDatum,
    adj: ClassicalAdjoint,
    v: RepModule<Scalar>,
    br: Braiding<Scalar>,
    pack: FormPack<Scalar>,
    cl: ClassicalTargets,
}

fn build(t: CartanType) -> Setup {
    let datum = RootDatum::new(t);
    let adj = ClassicalAdjoint::build(&datum).unwrap();
    let mut v = RepModule::adjoint(&datum).unwrap();
    if adj.gamma.is_some() {
        v = v.with_gamma(&adj).unwrap();
    }
    let br = Braiding::compute(&v).unwrap();
    let cl = ClassicalTargets::new(&v, &adj).unwrap();
    let pack = FormPack::build(&v, &cl).unwrap();
    Setup { t, datum, adj, v, br, pack, cl }
}

fn setup(t: CartanType) -> &'static Setup {
    static A1: OnceLock<Setup> = OnceLock::new();
    static A2: OnceLock<Setup> = OnceLock::new();
    match t {
        CartanType::A1 => A1.get_or_init(|| build(t)),
        CartanType::A2 => A2.get_or_init(|| build(t)),
        _ => panic!("no cached setup for {t}"),
    }
}

fn at1(m: &Mat<Scalar>) -> Mat<Rational> {
    m.try_map(|x| x.specialize(&int(1))).unwrap()
}

/// Classical Killing form `Tr(ad x ad y)` straight from the structure constants.
fn killing_from_bracket(bracket: &Mat<Rational>) -> Mat<Rational> {
    let n = bracket.nrows();
    let ad: Vec<Mat<Rational>> = (0..n)
        .map(|x| Mat::from_fn(n, n, |c, y| bracket.get(c, x * n + y)))
        .collect();
    Mat::from_fn(n, n, |x, y| ad[x].mul(&ad[y]).trace())
}

/// `h^∨ = 1 + 2(ρ, θ)/(θ, θ)`.
fn dual_coxeter(d: &RootDatum) -> i64 {
    1 + d.form(&d.two_rho(), &d.max_root) / d.form(&d.max_root, &d.max_root)
}

/// Σ (2j+1)² over spins `j ≤ d`.
fn sl2_counts(d: usize) -> u64 {
    (0..=d as u64).map(|j| (2 * j + 1).pow(2)).sum()
}

fn pairs_up_to(total: usize) -> Vec<(usize, usize)> {
    (0..=total).flat_map(|m| (0..=total - m).map(move |n| (m, n))).collect()
}

// 1

fn module_checks_at(v: &RepModule<Rational>) -> Result<(), String> {
    ensure!(v.relations_hold(), "relations fail");
    Ok(())
}

fn criterion_1() -> Outcome {
    let mut dims = Vec::new();
    for (t, want) in [(CartanType::A1, 3), (CartanType::A2, 8), (CartanType::B2, 10), (CartanType::G2, 14)] {
        let d = RootDatum::new(t);
        let adj = ClassicalAdjoint::build(&d).map_err(|e| e.to_string())?;
        let mut v = ok(RepModule::adjoint(&d))?;
        if adj.gamma.is_some() {
            v = ok(v.with_gamma(&adj))?;
        }
        for r in v.relation_residuals().into_iter().chain(v.gamma_residuals()) {
            ensure!(r.nonzero == 0, "{t}: {} has {} nonzero entries", r.name, r.nonzero);
        }
        ensure!(v.dim() == want, "{t}: dim {} != {want}", v.dim());
        ensure!(ok(d.weyl_dim(&d.max_root))? == want as u64, "{t}: Weyl dimension");
        dims.push(format!("{t}:{}", v.dim()));
    }
    Ok(dims.join(" "))
}

// 2

fn eigen_pattern<F: Field>(br: &Braiding<F>, v: &RepModule<F>) -> Result<BTreeMap<String, Vec<(F, usize)>>, String> {
    let iso = ok(br.isotypic_eigenvalues(v, -30..=30))?;
    Ok(iso.into_iter().map(|c| (format!("{:?}", c.weight), c.eigenvalues)).collect())
}

/// Flip signs on classical highest-weight vectors of each component.
fn classical_signs(s: &Setup, w: &qpres::roots::Weight) -> (usize, usize) {
    let v1 = s.v.at(&int(1)).unwrap();
    let t1 = TensorPower::new(&v1, 2);
    let sig = flip::<Rational>(s.v.dim());
    let hw = t1.highest_vectors(w);
    let sym: Vec<Vec<Rational>> = hw
        .iter()
        .map(|h| {
            let mut x = vec![int(0); t1.dim];
            for (k, c) in h {
                x[*k as usize] = c.clone();
            }
            let sx = sig.mul_vec(&x);
            x.iter().zip(&sx).map(|(a, b)| a + b).collect()
        })
        .collect();
    let plus = Mat::from_dense(sym).rank();
    (plus, hw.len() - plus)
}

fn braiding_checks(s: &Setup) -> Result<(), String> {
    ensure!(s.br.yang_baxter_residual().is_zero(), "{}: Yang-Baxter", s.t);
    ensure!(s.br.intertwining_residual(&TensorPower::new(&s.v, 2)) == 0, "{}: R does not intertwine", s.t);
    let iso = ok(s.br.isotypic_eigenvalues(&s.v, -30..=30))?;
    for c in &iso {
        let mut got = (0, 0);
        for (e, m) in &c.eigenvalues {
            match ok(e.specialize(&int(1)))? {
                x if x == int(1) => got.0 += m,
                x if x == int(-1) => got.1 += m,
                x => return Err(format!("{}: eigenvalue {e} is {x} at q = 1", s.t)),
            }
        }
        ensure!(got == classical_signs(s, &c.weight), "{}: sign pattern on {:?}", s.t, c.weight);
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for t in [CartanType::A1, CartanType::A2] {
        braiding_checks(setup(t))?;
    }
    let s = setup(CartanType::A2);
    let iso = ok(s.br.isotypic_eigenvalues(&s.v, -12..=12))?;
    let comp = iso.iter().find(|c| c.weight == s.datum.max_root).ok_or("no adjoint component")?;
    let mut e: Vec<String> = comp.eigenvalues.iter().map(|(x, _)| x.to_string()).collect();
    e.sort();
    ensure!(e == ["-q^-3", "q^-3"] || e == ["-q^3", "q^3"], "A2 adjoint eigenvalues {e:?}");
    Ok(format!("A2 adjoint component {}", e.join(", ")))
}

// 3

fn hom_checks<F: Field>(s: &Setup, v: &RepModule<F>, total: usize) -> Result<(), String> {
    for (m, n) in pairs_up_to(total) {
        let h = ok(hom_space(v, m, n, false, DEFAULT_BUDGET))?;
        let want = ok(classical_hom_dim(&s.datum, m, n))?;
        ensure!(h.len() as u64 == want, "{}: Hom({m},{n}) = {} != {want}", s.t, h.len());
    }
    if v.gamma.is_some() {
        ensure!(ok(hom_space(v, 2, 1, true, DEFAULT_BUDGET))?.len() == 1, "{}: Γ-fixed Hom(V⊗V, V)", s.t);
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    for t in [CartanType::A1, CartanType::A2] {
        let s = setup(t);
        let plain = ok(RepModule::adjoint(&s.datum))?;
        hom_checks(s, &plain, 4)?;
        hom_checks(s, &s.v, 0)?;
        let phi = &s.cl.phi;
        ensure!(phi.mul(&at1(&s.pack.l)) == s.adj.bracket.mul(&phi.kron(phi)), "{t}: L at q = 1");
        ensure!(at1(&s.pack.a) == phi.transpose().mul(&s.adj.form_b).mul(phi), "{t}: B at q = 1");
        for r in verify_relations(&s.v, &s.br, &s.pack) {
            ensure!(r.nonzero == 0, "{t}: {}", r.name);
        }
    }
    let a2 = setup(CartanType::A2);
    let two = ok(hom_space(&ok(RepModule::adjoint(&a2.datum))?, 2, 1, false, DEFAULT_BUDGET))?.len();
    Ok(format!("A2 Hom(V⊗V, V): {two}, Γ-fixed: 1"))
}

// 4

fn composite_ratio<F: Field>(pack: &FormPack<F>, br: &Braiding<F>) -> Result<F, String> {
    let kt = killing_composite(&pack.l, &br.u);
    let c = proportionality(&kt, &pack.b).ok_or("trace composite not proportional to B")?;
    ensure!(!c.is_zero(), "trace composite vanishes");
    Ok(c)
}

fn criterion_4() -> Outcome {
    let mut out = Vec::new();
    for t in [CartanType::A1, CartanType::A2] {
        let s = setup(t);
        let c = composite_ratio(&s.pack, &s.br)?;
        let kt = at1(&killing_composite(&s.pack.l, &s.br.u));
        let phi = &s.cl.phi;
        let killing = phi.transpose().mul(&killing_from_bracket(&s.adj.bracket)).mul(phi);
        ensure!(kt == form_row(&killing), "{t}: composite at q = 1 is not the Killing form");
        let c1 = ok(c.specialize(&int(1)))?;
        let want = int(2 * dual_coxeter(&s.datum));
        ensure!(c1 == want, "{t}: ratio {c1} != {want}");
        let comp = ok(composite_certificate(&input(s, Selector::R1R3Inv)))?.ok_or("no composite certificate")?;
        ensure!(comp.ratio == c, "{t}: composite routes disagree");
        out.push(format!("{t} ratio {c1}"));
    }
    let a1 = setup(CartanType::A1);
    let rep = ok(r2_redundancy_check(&input(a1, Selector::R1R3Inv), 4, DEFAULT_WORD_BUDGET))?;
    ensure!(rep.verdict == Membership::Member, "A1 TᵗAT − A: {}/{} members at 4", rep.members, rep.entries);
    out.push("A1 TᵗAT − A in the ideal at D' = 4".into());
    Ok(out.join("; "))
}

// 5

fn input(s: &Setup, sel: Selector) -> PresentationInput<Scalar> {
    PresentationInput::new(s.v.weights.clone(), s.br.r.clone(), Some(s.pack.l.clone()), Some(s.pack.a.clone()), sel).unwrap()
}

fn certify<F: ModularImage>(s: &Setup, r2: &PresentationInput<F>, inv: &PresentationInput<F>, degree: usize, truncation: usize, want: &[u64]) -> Result<(), String> {
    let lower = |d| peter_weyl_dim(&s.datum, &s.adj, s.adj.gamma.is_some(), d);
    for d in 1..=degree {
        ensure!(ok(lower(d))? == want[d - 1], "{}: Peter–Weyl count at {d}", s.t);
    }
    let a = ok(filtered_dims(r2, degree, truncation, &lower, DEFAULT_WORD_BUDGET))?;
    ensure!(a.certified() && a.uppers()[1..] == *want, "R1R2R3 {:?}", a.uppers());
    let plain = ok(filtered_dims(inv, 1, 4.max(truncation), &lower, DEFAULT_WORD_BUDGET))?;
    ensure!(plain.certified() && plain.uppers()[1] == want[0], "R1R3Inv degree one {:?}", plain.uppers());
    let by_membership = ok(Extension::from_membership(inv, 4, DEFAULT_WORD_BUDGET))?.ok_or("TᵗAT − A not a member at 4")?;
    let by_composite = ok(Extension::from_composite(inv))?.ok_or("no composite certificate")?;
    ensure!(by_membership.rows.len() == by_composite.rows.len(), "routes imply different rows");
    let b = ok(filtered_dims_extended(inv, Some(&by_membership), degree, truncation, &lower, DEFAULT_WORD_BUDGET))?;
    ensure!(b.certified() && b.uppers() == a.uppers(), "R1R3Inv {:?} vs R1R2R3 {:?}", b.uppers(), a.uppers());
    Ok(())
}

fn criterion_5() -> Outcome {
    let s = setup(CartanType::A1);
    let want: Vec<u64> = (1..=3).map(sl2_counts).collect();
    for q0 in [int(2), rat(1, 2), int(5)] {
        let at = |sel| input(s, sel).map(|x| x.specialize(&q0)).unwrap();
        certify(s, &at(Selector::R1R2R3), &at(Selector::R1R3Inv), 3, 4, &want).map_err(|e| format!("A1 at {q0}: {e}"))?;
    }
    certify(s, &input(s, Selector::R1R2R3), &input(s, Selector::R1R3Inv), 2, 3, &want[..2]).map_err(|e| format!("A1 generic: {e}"))?;
    let a2 = setup(CartanType::A2);
    let inv: PresentationInput<Rational> = input(a2, Selector::R1R3Inv).map(|x| x.specialize(&int(2))).unwrap();
    let ext = ok(Extension::from_composite(&inv))?.ok_or("A2: no composite certificate")?;
    let lower = |d| peter_weyl_dim(&a2.datum, &a2.adj, true, d);
    let t = ok(filtered_dims_extended(&inv, Some(&ext), 1, 2, &lower, DEFAULT_WORD_BUDGET))?;
    ensure!(t.certified() && t.uppers() == [1, 1 + 64], "A2 at 2: {:?}", t.uppers());
    Ok("A1 10, 35, 84 at 2, 1/2, 5; 10, 35 over Q(q); both selectors agree; A2 65 at 2".into())
}

// 6

fn criterion_6() -> Outcome {
    let mut dims = Vec::new();
    for t in [CartanType::A1, CartanType::A2] {
        let s = setup(t);
        let rep = ok(antipode_identity_check(&s.v, &s.br, &s.pack))?;
        ensure!(rep.holds(), "{t}: {rep:?}");
        dims.push(format!("{t} evaluation space {}", rep.evaluation_dim));
        let b1 = ok(Braiding::compute(&ok(s.v.at(&int(1)))?))?;
        ensure!(b1.u.is_identity(), "{t}: u at q = 1");
        ensure!(at1(&s.br.u).is_identity(), "{t}: generic u at q = 1");
    }
    Ok(dims.join(", "))
}

// 7

fn criterion_7() -> Outcome {
    let s = setup(CartanType::A1);
    let pairs = pairs_up_to(4);
    let res = ok(spanning_check(&s.v, &s.br, &s.pack, &pairs, 4, 4, &|m, n| Ok(classical_hom_dim(&s.datum, m, n)? as usize)))?;
    for r in &res {
        ensure!(r.spans, "A1 Hom({},{}) spanned {}/{} at depth 4", r.source, r.target, r.span_dim, r.hom_dim);
    }
    let a2 = setup(CartanType::A2);
    let m = ModP::<1_000_003>::new(int(7)).unwrap();
    let pp: FormPack<Fp<1_000_003>> = ok(a2.pack.specialize(&m))?;
    let vs = ok(a2.v.specialize(&m))?;
    let bs = ok(Braiding::compute(&vs))?;
    let res = ok(spanning_check(&vs, &bs, &pp, &[(2, 1), (2, 2)], 4, 3, &|x, y| Ok(hom_space(&a2.v, x, y, true, DEFAULT_BUDGET)?.len())))?;
    for r in &res {
        ensure!(r.spans, "A2 Hom({},{}) spanned {}/{} at depth 4", r.source, r.target, r.span_dim, r.hom_dim);
    }
    Ok(format!("A1 all {} pairs; A2 (2,1), (2,2)", pairs.len()))
}

// 8

fn at_point(t: CartanType, q0: &Rational) -> Result<(), String> {
    let s = setup(t);
    ensure!(s.v.is_regular_at(q0), "module has a pole");
    let sp = AtRational(q0.clone());
    let v = ok(s.v.specialize(&sp))?;
    module_checks_at(&v)?;
    let br = ok(Braiding::compute(&v))?;
    ensure!(br.r == ok(s.br.r.try_map(|x| x.specialize(q0)))?, "R differs from the specialized solution");
    ensure!(br.yang_baxter_residual().is_zero(), "Yang-Baxter");
    let generic = eigen_pattern(&s.br, &s.v)?;
    let special = eigen_pattern(&br, &v)?;
    for (w, es) in &generic {
        let mut a: Vec<(Rational, usize)> = es.iter().map(|(e, m)| (e.specialize(q0).unwrap(), *m)).collect();
        let mut b = special.get(w).cloned().unwrap_or_default();
        a.sort_by_key(|x| x.0.to_string());
        b.sort_by_key(|x| x.0.to_string());
        ensure!(a == b, "eigenvalues on {w}");
    }
    let plain = ok(ok(RepModule::adjoint(&s.datum))?.specialize(&sp))?;
    hom_checks(s, &plain, 3)?;
    if t == CartanType::A2 {
        hom_checks(s, &v, 0)?;
    }
    let pack = ok(s.pack.specialize(&sp))?;
    for r in verify_relations(&v, &br, &pack) {
        ensure!(r.nonzero == 0, "{}", r.name);
    }
    let c = composite_ratio(&pack, &br)?;
    ensure!(c == ok(composite_ratio(&s.pack, &s.br)?.specialize(q0))?, "composite ratio");
    if t == CartanType::A1 {
        let inp = input(s, Selector::R1R3Inv).map(|x| x.specialize(q0)).unwrap();
        let rep = ok(r2_redundancy_check(&inp, 4, DEFAULT_WORD_BUDGET))?;
        ensure!(rep.verdict == Membership::Member, "TᵗAT − A membership");
    }
    ensure!(ok(antipode_identity_check(&v, &br, &pack))?.holds(), "antipode identities");
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for q0 in [int(2), rat(1, 2), int(5), int(-3)] {
        let d = RootDatum::new(CartanType::B2);
        let v = ok(RepModule::adjoint(&d))?;
        if !ok(v.at(&q0))?.relations_hold() {
            bad.push(format!("B2 at {q0}: module relations"));
        }
        for t in [CartanType::A1, CartanType::A2] {
            if let Err(e) = at_point(t, &q0) {
                bad.push(format!("{t} at {q0}: {e}"));
            }
        }
    }
    ensure!(bad.is_empty(), "bad values: {}", bad.join("; "));
    Ok("no bad value among 2, 1/2, 5, -3".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("module relations and dimensions", criterion_1),
        ("braiding", criterion_2),
        ("intertwiners and normalization", criterion_3),
        ("Killing composite and R2 membership", criterion_4),
        ("presentation certification", criterion_5),
        ("antipode identities", criterion_6),
        ("spanning at depth 4", criterion_7),
        ("specialization robustness", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
