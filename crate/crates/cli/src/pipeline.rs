//! The staged pipeline behind every subcommand.

use crate::cache::Cache;
use crate::config::{QMode, RunConfig};
use crate::report::{Check, Report, StageReport, Status};
use anyhow::{anyhow, Result};
use qpres::braiding::Braiding;
use qpres::field::{AtRational, Fp, Generic, ModP, Specialize};
use qpres::intertwiners::{
    classical_hom_dim, form_row, hom_space, killing_composite, spanning_check, verify_relations, ClassicalTargets, FormPack,
    DEFAULT_BUDGET,
};
use qpres::linalg::Mat;
use qpres::presentation::{
    antipode_identity_check, composite_certificate, coproduct_check, filtered_dims_extended, r2_redundancy_check, Extension,
    Membership, ModularImage, PresentationInput, Selector, Status as DimStatus, P1,
};
use qpres::roots::{peter_weyl_dim, proportionality, CartanType, ClassicalAdjoint, RootDatum};
use qpres::scalar::int;
use qpres::tensor::{flip, TensorPower};
use qpres::uqmod::RepModule;
use qpres::{Error, Field, Scalar};
use serde_json::json;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Build,
    Rmatrix,
    Intertwiners,
    Verify,
    R2,
    Hilbert,
    Antipode,
    Span,
}

impl Stage {
    pub const ALL: [Stage; 8] =
        [Stage::Build, Stage::Rmatrix, Stage::Intertwiners, Stage::Verify, Stage::R2, Stage::Hilbert, Stage::Antipode, Stage::Span];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Build => "build",
            Stage::Rmatrix => "rmatrix",
            Stage::Intertwiners => "intertwiners",
            Stage::Verify => "verify",
            Stage::R2 => "r2",
            Stage::Hilbert => "hilbert",
            Stage::Antipode => "antipode",
            Stage::Span => "span",
        }
    }

    fn prerequisite(self) -> Option<Stage> {
        match self {
            Stage::Build => None,
            Stage::Rmatrix => Some(Stage::Build),
            Stage::Intertwiners => Some(Stage::Rmatrix),
            Stage::Verify | Stage::R2 | Stage::Antipode | Stage::Span => Some(Stage::Intertwiners),
            Stage::Hilbert => Some(Stage::R2),
        }
    }

    /// `self` and everything it depends on.
    pub fn closure(self) -> Vec<Stage> {
        let mut out = vec![self];
        let mut s = self;
        while let Some(p) = s.prerequisite() {
            out.push(p);
            s = p;
        }
        out.sort();
        out
    }
}

/// Every stage, or `target` with its prerequisites.
pub fn stages_for(target: Option<Stage>) -> Vec<Stage> {
    target.map(Stage::closure).unwrap_or_else(|| Stage::ALL.to_vec())
}

/// Generic artifacts over ℚ(q), shared by every specialization.
pub struct Setup {
    pub datum: RootDatum,
    pub adj: ClassicalAdjoint,
    pub v: RepModule<Scalar>,
    pub br: Option<Braiding<Scalar>>,
    pub pack: Option<FormPack<Scalar>>,
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    wanted: Vec<Stage>,
    report: Report,
    aborted: Option<Stage>,
}

impl Runner<'_> {
    /// Run `f` as `stage` if wanted and nothing upstream failed.
    fn stage<T>(&mut self, stage: Stage, f: impl FnOnce() -> Result<(Vec<Check>, serde_json::Value, T)>) -> Option<T> {
        if !self.wanted.contains(&stage) {
            return None;
        }
        if let Some(a) = self.aborted {
            self.report.push(StageReport::skipped(stage.name(), &format!("{} failed", a.name())));
            return None;
        }
        let start = Instant::now();
        let res = f();
        self.report.run.timings.insert(stage.name().into(), start.elapsed().as_secs_f64() * 1e3);
        match res {
            Ok((checks, data, out)) => {
                let r = StageReport::new(stage.name(), checks, data);
                if r.status == Status::Fail {
                    self.aborted = Some(stage);
                }
                self.report.push(r);
                Some(out)
            }
            Err(e) => {
                self.aborted = Some(stage);
                self.report.push(StageReport::error(stage.name(), &e));
                None
            }
        }
    }

    fn skip(&mut self, stage: Stage, why: &str) {
        if self.wanted.contains(&stage) {
            let why = match self.aborted {
                Some(a) => format!("{} failed", a.name()),
                None => why.into(),
            };
            self.report.push(StageReport::skipped(stage.name(), &why));
        }
    }
}

fn residual_check(name: &str, nonzero: usize) -> Check {
    Check::bool(name, nonzero == 0, if nonzero == 0 { String::new() } else { format!("{nonzero} nonzero entries") })
}

fn module_key(t: CartanType) -> String {
    format!("module-{t}")
}

/// The Γ-extended adjoint module over ℚ(q) when Γ ≠ 1.
pub fn generic_module(datum: &RootDatum, adj: &ClassicalAdjoint) -> qpres::Result<RepModule<Scalar>> {
    let v = RepModule::adjoint(datum)?;
    if adj.gamma.is_some() {
        v.with_gamma(adj)
    } else {
        Ok(v)
    }
}

pub fn load_setup(t: CartanType, cache: &mut Cache) -> Result<Setup> {
    let datum = RootDatum::new(t);
    let adj = ClassicalAdjoint::build(&datum)?;
    let v = cache.get_or(&module_key(t), || Ok(generic_module(&datum, &adj)?))?;
    Ok(Setup { datum, adj, v, br: None, pack: None })
}

pub fn generic_braiding(s: &mut Setup, cache: &mut Cache) -> Result<Braiding<Scalar>> {
    if s.br.is_none() {
        let v = &s.v;
        s.br = Some(cache.get_or(&format!("rmatrix-{}", s.datum.cartan_type), || Ok(Braiding::compute(v)?))?);
    }
    Ok(s.br.clone().unwrap())
}

pub fn generic_pack(s: &mut Setup, cache: &mut Cache) -> Result<FormPack<Scalar>> {
    if s.pack.is_none() {
        let (v, adj) = (&s.v, &s.adj);
        s.pack = Some(cache.get_or(&format!("forms-{}", s.datum.cartan_type), || {
            let cl = ClassicalTargets::new(v, adj)?;
            Ok(FormPack::build(v, &cl)?)
        })?);
    }
    Ok(s.pack.clone().unwrap())
}

/// Run the stages of `target` (all stages when `None`) and assemble the report.
pub fn run(cfg: &RunConfig, target: Option<Stage>) -> Report {
    let mut cache = Cache::new(cfg.cache_dir.as_deref());
    let mut runner = Runner { cfg, wanted: stages_for(target), report: Report::new(cfg.clone()), aborted: None };
    let setup = runner.stage(Stage::Build, || build_stage(cfg, &mut cache));
    if let Some(mut setup) = setup {
        match &cfg.q {
            QMode::Generic => field_stages(&mut runner, &mut setup, &mut cache, &Generic),
            QMode::At(q0) => field_stages(&mut runner, &mut setup, &mut cache, &AtRational(q0.clone())),
        }
    } else {
        for s in Stage::ALL.iter().skip(1) {
            runner.skip(*s, "build failed");
        }
    }
    runner.report.run.cache_hits = cache.hits;
    runner.report.run.cache_writes = cache.writes;
    runner.report
}

fn build_stage(cfg: &RunConfig, cache: &mut Cache) -> Result<(Vec<Check>, serde_json::Value, Setup)> {
    let s = load_setup(cfg.cartan, cache)?;
    let mut checks: Vec<Check> = s.v.relation_residuals().iter().chain(&s.v.gamma_residuals()).map(|r| residual_check(&r.name, r.nonzero)).collect();
    let weyl = s.datum.weyl_dim(&s.datum.max_root)?;
    checks.push(Check::bool("dimension equals the Weyl dimension", s.v.dim() as u64 == weyl, format!("{} vs {weyl}", s.v.dim())));
    if let Some(q0) = cfg.q.point() {
        let regular = s.v.is_regular_at(q0);
        checks.push(Check::bool(format!("regular at q = {q0}"), regular, ""));
        if regular {
            checks.push(Check::bool(format!("relations hold at q = {q0}"), s.v.at(q0)?.relations_hold(), ""));
        }
    }
    let data = json!({ "dim": s.v.dim(), "rank": s.v.rank(), "gamma": s.v.gamma.is_some() });
    Ok((checks, data, s))
}

/// What the stages after `build` share, all over the working field.
struct Work<F> {
    v: RepModule<F>,
    br: Braiding<F>,
    pack: FormPack<F>,
}

impl<F: ModularImage> Work<F> {
    fn input(&self, sel: Selector) -> qpres::Result<PresentationInput<F>> {
        PresentationInput::new(self.v.weights.clone(), self.br.r.clone(), Some(self.pack.l.clone()), Some(self.pack.a.clone()), sel)
    }
}

fn field_stages<F: ModularImage, S: Specialize<F>>(runner: &mut Runner, s: &mut Setup, cache: &mut Cache, sp: &S) {
    let cfg = runner.cfg;
    let classical = cfg.q.is_classical();
    let rm = runner.stage(Stage::Rmatrix, || rmatrix_stage(cfg, s, cache, sp));
    let Some((v, br)) = rm else {
        for st in Stage::ALL.iter().skip(2) {
            runner.skip(*st, "rmatrix failed");
        }
        return;
    };
    let pack = runner.stage(Stage::Intertwiners, || intertwiners_stage(s, cache, sp, &v, &br));
    let Some(pack) = pack else {
        for st in Stage::ALL.iter().skip(3) {
            runner.skip(*st, "intertwiners failed");
        }
        return;
    };
    let w = Work { v, br, pack };
    runner.stage(Stage::Verify, || verify_stage(&w));
    if classical {
        for st in [Stage::R2, Stage::Hilbert, Stage::Antipode, Stage::Span] {
            runner.skip(st, "classical mode");
        }
        return;
    }
    let ext = runner.stage(Stage::R2, || r2_stage(cfg, &w)).flatten();
    runner.stage(Stage::Hilbert, || hilbert_stage(cfg, s, &w, ext.as_ref()));
    runner.stage(Stage::Antipode, || antipode_stage(&w));
    runner.stage(Stage::Span, || span_stage(cfg, s, cache));
}

fn rmatrix_stage<F: Field, S: Specialize<F>>(
    cfg: &RunConfig,
    s: &mut Setup,
    cache: &mut Cache,
    sp: &S,
) -> Result<(Vec<Check>, serde_json::Value, (RepModule<F>, Braiding<F>))> {
    let generic = generic_braiding(s, cache)?;
    let v = s.v.specialize(sp)?;
    let br = specialize_braiding(&generic, sp)?;
    let n = v.dim();
    let mut checks = vec![
        Check::bool("Yang-Baxter", br.yang_baxter_residual().is_zero(), ""),
        residual_check("sigma R commutes with the action on V⊗V", br.intertwining_residual(&TensorPower::new(&v, 2))),
    ];
    if cfg.q.point().is_some() {
        let direct = Braiding::compute(&v)?;
        checks.push(Check::bool("R solved at the point equals the specialized generic R", direct.r == br.r, ""));
    }
    let mut data = json!({ "n": n, "theta_unknowns": br.theta_unknowns });
    if cfg.q.is_classical() {
        checks.push(Check::bool("R = 1 at q = 1", br.r.is_identity(), ""));
        checks.push(Check::bool("sigma R is the flip at q = 1", br.rhat == flip::<F>(n), ""));
    } else {
        let iso = br.isotypic_eigenvalues(&v, -30..=30)?;
        let found = iso.iter().all(|c| c.eigenvalues.iter().map(|e| e.1).sum::<usize>() == c.multiplicity);
        checks.push(Check::bool("eigenvalues of sigma R are ±q^k on every component", found, ""));
        data["components"] = iso
            .iter()
            .map(|c| {
                json!({
                    "weight": c.weight,
                    "multiplicity": c.multiplicity,
                    "eigenvalues": c.eigenvalues.iter().map(|(e, m)| json!([e.to_string(), m])).collect::<Vec<_>>(),
                })
            })
            .collect();
    }
    Ok((checks, data, (v, br)))
}

fn specialize_braiding<F: Field, S: Specialize<F>>(b: &Braiding<Scalar>, sp: &S) -> Result<Braiding<F>> {
    let f = |m: &Mat<Scalar>| m.try_map(|x| sp.apply(x));
    Ok(Braiding {
        n: b.n,
        r: f(&b.r)?,
        r_inv: f(&b.r_inv)?,
        rhat: f(&b.rhat)?,
        rhat_inv: f(&b.rhat_inv)?,
        d: f(&b.d)?,
        theta: f(&b.theta)?,
        u: f(&b.u)?,
        v: f(&b.v)?,
        theta_unknowns: b.theta_unknowns,
    })
}

fn intertwiners_stage<F: Field, S: Specialize<F>>(
    s: &mut Setup,
    cache: &mut Cache,
    sp: &S,
    v: &RepModule<F>,
    br: &Braiding<F>,
) -> Result<(Vec<Check>, serde_json::Value, FormPack<F>)> {
    let generic = generic_pack(s, cache)?;
    let gbr = generic_braiding(s, cache)?;
    let pack = generic.specialize(sp)?;
    let mut checks = Vec::new();
    let hom21 = hom_space(v, 2, 1, false, DEFAULT_BUDGET)?.len();
    let want21 = classical_hom_dim(&s.datum, 2, 1)? as usize;
    checks.push(Check::bool("dim Hom(V⊗V, V) is classical", hom21 == want21, format!("{hom21} vs {want21}")));
    let hom20 = hom_space(v, 2, 0, false, DEFAULT_BUDGET)?.len();
    checks.push(Check::bool("dim Hom(V⊗V, 1) = 1", hom20 == 1, format!("{hom20}")));
    let mut data = json!({ "hom_2_1": hom21, "hom_2_0": hom20 });
    if v.gamma.is_some() {
        let fixed = hom_space(v, 2, 1, true, DEFAULT_BUDGET)?.len();
        checks.push(Check::bool("Γ-fixed Hom(V⊗V, V) is a line", fixed == 1, format!("{fixed} of {hom21}")));
        data["gamma_fixed_hom_2_1"] = json!(fixed);
    }

    // normalizations against the classical targets
    let cl = ClassicalTargets::new(&s.v, &s.adj)?;
    let one = AtRational(int(1));
    let p1 = generic.specialize(&one)?;
    checks.push(Check::bool("L is the Lie bracket at q = 1", p1.l == cl.bracket, ""));
    checks.push(Check::bool("A is the invariant form at q = 1", p1.a == cl.form, ""));
    checks.push(Check::bool("L' / L† = 1 at q = 1", p1.ratio == int(1), ""));
    let kt = killing_composite(&generic.l, &gbr.u);
    let kt1 = kt.try_map(|x| one.apply(x))?;
    checks.push(Check::bool("trace composite is the Killing form at q = 1", kt1 == form_row(&cl.killing), ""));
    let ratio = proportionality(&kt, &generic.b);
    checks.push(Check::bool("trace composite is a multiple of B", ratio.as_ref().is_some_and(|c| !c.is_zero()), ""));
    if let Some(c) = &ratio {
        data["killing_ratio"] = json!(c.to_string());
        data["killing_ratio_at_1"] = json!(c.specialize(&int(1))?.to_string());
    }
    data["l_dual_ratio"] = json!(generic.ratio.to_string());
    data["normalization"] = serde_json::to_value(&generic.normalization)?;
    let kt_f = killing_composite(&pack.l, &br.u);
    let ok_f = matches!(&ratio, Some(c) if proportionality(&kt_f, &pack.b) == Some(sp.apply(c)?));
    checks.push(Check::bool("trace composite ratio specializes", ok_f, ""));
    Ok((checks, data, pack))
}

fn verify_stage<F: ModularImage>(w: &Work<F>) -> Result<(Vec<Check>, serde_json::Value, ())> {
    let mut checks: Vec<Check> = verify_relations(&w.v, &w.br, &w.pack).iter().map(|r| residual_check(&r.name, r.nonzero)).collect();
    let input = w.input(Selector::R1R3Inv)?;
    let cop = coproduct_check(&input)?;
    checks.push(Check::bool(
        "coproduct preserves the relations",
        cop.failures.is_empty(),
        if cop.failures.is_empty() { format!("{} rows", cop.relations) } else { cop.failures.join(", ") },
    ));
    Ok((checks, json!({ "coproduct_rows": cop.relations }), ()))
}

fn r2_stage<F: ModularImage>(cfg: &RunConfig, w: &Work<F>) -> Result<(Vec<Check>, serde_json::Value, Option<Extension<F>>)> {
    let input = w.input(Selector::R1R3Inv)?;
    let mut data = json!({});
    let mut checks = Vec::new();
    let comp = composite_certificate(&input)?;
    let ext = Extension::from_composite(&input)?;
    match &comp {
        Some(c) => {
            checks.push(Check::new("composite certificate", Status::Pass, format!("mate {}, ratio {}", c.mate, c.ratio)));
            data["composite"] = json!({ "mate": c.mate, "ratio": c.ratio.to_string() });
        }
        None => checks.push(Check::new("composite certificate", Status::Inconclusive, "no mate of sigma R gives a multiple of A")),
    }
    let membership = match r2_redundancy_check(&input, cfg.truncation, cfg.word_budget) {
        Ok(rep) => {
            let status = if rep.verdict == Membership::Member { Status::Pass } else { Status::Inconclusive };
            data["membership"] = serde_json::to_value(&rep)?;
            Check::new(format!("TᵗAT − A in the ideal at D' = {}", cfg.truncation), status, format!("{}/{} entries", rep.members, rep.entries))
        }
        Err(e @ Error::Budget(_)) => Check::new("TᵗAT − A in the ideal", Status::Inconclusive, e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let proved = comp.is_some() || membership.status == Status::Pass;
    checks.push(membership);
    data["verdict"] = json!(if proved { "member" } else { "inconclusive" });
    let mut checks = checks;
    if proved {
        // either route is a proof; the other staying open is not a failure
        for c in &mut checks {
            if c.status == Status::Inconclusive {
                c.status = Status::Skipped;
            }
        }
    }
    let ext = if cfg.relations == Selector::R1R3Inv { ext } else { None };
    Ok((checks, data, ext))
}

fn hilbert_stage<F: ModularImage>(
    cfg: &RunConfig,
    s: &Setup,
    w: &Work<F>,
    ext: Option<&Extension<F>>,
) -> Result<(Vec<Check>, serde_json::Value, ())> {
    let input = w.input(cfg.relations)?;
    let gamma = s.adj.gamma.is_some();
    let lower = |d| peter_weyl_dim(&s.datum, &s.adj, gamma, d);
    let ext = if cfg.relations == Selector::R1R3Inv { ext } else { None };
    let t = match filtered_dims_extended(&input, ext, cfg.degree, cfg.truncation, &lower, cfg.word_budget) {
        Ok(t) => t,
        Err(e @ Error::Budget(_)) => return Ok((vec![Check::new("filtered dimensions", Status::Inconclusive, e.to_string())], json!(null), ())),
        Err(e) => return Err(e.into()),
    };
    let checks = t
        .table
        .iter()
        .skip(1)
        .map(|r| {
            let status = match r.status {
                Some(DimStatus::CertifiedEqual) => Status::Pass,
                _ => Status::Inconclusive,
            };
            let lower = r.lower.map(|l| l.to_string()).unwrap_or_else(|| "?".into());
            Check::new(format!("dim F_{}", r.d), status, format!("upper {} / lower {lower} at D' = {}", r.upper, cfg.truncation))
        })
        .collect();
    Ok((checks, serde_json::to_value(&t)?, ()))
}

fn antipode_stage<F: Field>(w: &Work<F>) -> Result<(Vec<Check>, serde_json::Value, ())> {
    let rep = antipode_identity_check(&w.v, &w.br, &w.pack)?;
    let checks = vec![
        residual_check("m(S ⊗ id)Δ = ε", rep.first),
        residual_check("m(id ⊗ S)Δ = ε", rep.second),
        residual_check("m(S ⊗ id)Δ = ε with v⁻¹", rep.first_v),
        residual_check("m(id ⊗ S)Δ = ε with v⁻¹", rep.second_v),
    ];
    Ok((checks, serde_json::to_value(&rep)?, ()))
}

/// Spanning is tested modulo a large prime at `q0` (7 when generic). Composites only lose
/// rank and `Hom` only grows under reduction, so equality there implies it over the field.
fn span_stage(cfg: &RunConfig, s: &mut Setup, cache: &mut Cache) -> Result<(Vec<Check>, serde_json::Value, ())> {
    let q0 = cfg.q.point().cloned().unwrap_or_else(|| int(7));
    let m = ModP::<P1>::new(q0.clone())?;
    let pack: FormPack<Fp<P1>> = generic_pack(s, cache)?.specialize(&m)?;
    let v = s.v.specialize(&m)?;
    let br = Braiding::compute(&v)?;
    let (pairs, legs): (Vec<(usize, usize)>, usize) = if cfg.cartan == CartanType::A1 {
        ((0..=4).flat_map(|a| (0..=4 - a).map(move |b| (a, b))).collect(), 4)
    } else {
        (vec![(2, 1), (2, 2)], 3)
    };
    let gamma = v.gamma.is_some();
    let res = spanning_check(&v, &br, &pack, &pairs, cfg.span_depth, legs, &|a, b| Ok(hom_space(&v, a, b, gamma, DEFAULT_BUDGET)?.len()))?;
    let checks = res
        .iter()
        .map(|r| {
            let status = if r.spans { Status::Pass } else { Status::Inconclusive };
            Check::new(format!("Hom({}, {}) spanned", r.source, r.target), status, format!("{}/{} at depth {}", r.span_dim, r.hom_dim, r.depth))
        })
        .collect();
    Ok((checks, json!({ "q0": q0.to_string(), "prime": P1, "results": res }), ()))
}

/// Matrices that must be proportional, with the factor as text.
pub fn ratio_text<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Result<String> {
    proportionality(a, b).map(|c| c.to_string()).ok_or_else(|| anyhow!("not proportional"))
}
