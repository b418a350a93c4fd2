use qpres::linalg::Mat;
use qpres::tensor::flip;
use qpres::{Field, Scalar};
use qpres_cli::pipeline::{run, Stage};
use qpres_cli::report::Status;
use qpres_cli::{ConfigFile, RunConfig};
use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn config(cartan: &str, q: &str, degree: usize, truncation: Option<usize>, cache: Option<&Path>) -> RunConfig {
    RunConfig::resolve(ConfigFile {
        cartan: Some(cartan.into()),
        q: Some(q.into()),
        degree: Some(degree),
        truncation,
        cache_dir: cache.map(Path::to_path_buf),
        ..Default::default()
    })
    .unwrap()
}

fn stage<'a>(body: &'a Value, name: &str) -> &'a Value {
    body["stages"].as_array().unwrap().iter().find(|s| s["stage"] == name).unwrap_or_else(|| panic!("no stage {name}"))
}

fn qpres(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qpres")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

/// Σ (2j+1)² over spins `j ≤ d`.
fn sl2_counts(d: u64) -> u64 {
    (0..=d).map(|j| (2 * j + 1).pow(2)).sum()
}

#[test]
fn a1_generic_pipeline_certifies() {
    let cfg = config("A1", "generic", 2, Some(3), None);
    let rep = run(&cfg, None);
    let body = rep.body();
    assert_eq!(rep.verdict, Status::Pass, "{body:#}");
    let table = stage(&body, "hilbert")["data"]["table"].as_array().unwrap().clone();
    for row in &table[1..] {
        let d = row["d"].as_u64().unwrap();
        assert_eq!(row["upper"].as_u64(), Some(sl2_counts(d)));
        assert_eq!(row["status"], "CertifiedEqual");
    }
    assert_eq!(table.len(), 3);
    // membership needs D' = 4; the composite route carries the stage at 3
    let r2 = stage(&body, "r2");
    assert_eq!(r2["data"]["verdict"], "member");
    assert_eq!(r2["status"], "pass");
    assert_eq!(body["config"]["truncation"], 3);
    assert_eq!(body["convention"], qpres::braiding::CONVENTION);
}

#[test]
fn reports_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("A1", "5", 1, None, Some(dir.path()));
    let first = run(&cfg, None);
    let second = run(&cfg, None);
    assert_eq!(first.verdict, Status::Pass);
    assert_eq!(serde_json::to_string(&first.body()).unwrap(), serde_json::to_string(&second.body()).unwrap());
    assert!(first.run.cache_hits.is_empty());
    assert!(first.run.cache_writes.contains(&"rmatrix-A1".to_string()));
    assert!(second.run.cache_hits.contains(&"rmatrix-A1".to_string()));
    assert!(second.run.cache_writes.is_empty());
    let fresh = run(&config("A1", "5", 1, None, None), None);
    assert_eq!(first.body()["stages"], fresh.body()["stages"]);
}

#[test]
fn a2_gamma_fixed_bracket_is_unique() {
    let cfg = config("A2", "2", 1, None, None);
    let rep = run(&cfg, Some(Stage::Intertwiners));
    let body = rep.body();
    assert_eq!(rep.verdict, Status::Pass, "{body:#}");
    let data = &stage(&body, "intertwiners")["data"];
    assert_eq!(data["hom_2_1"], 2);
    assert_eq!(data["gamma_fixed_hom_2_1"], 1);
    assert_eq!(data["killing_ratio_at_1"], "6");
    assert_eq!(body["stages"].as_array().unwrap().len(), 3);
}

#[test]
fn classical_mode_skips_quantum_stages() {
    let rep = run(&config("A1", "1", 2, None, None), None);
    let body = rep.body();
    assert_eq!(rep.verdict, Status::Pass, "{body:#}");
    let names: Vec<&str> = stage(&body, "rmatrix")["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"sigma R is the flip at q = 1"));
    for s in ["r2", "hilbert", "antipode", "span"] {
        assert_eq!(stage(&body, s)["status"], "skipped");
    }
}

#[test]
fn poisoned_cache_fails_and_skips_downstream() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("A1", "generic", 1, None, Some(dir.path()));
    assert_eq!(run(&cfg, Some(Stage::Rmatrix)).verdict, Status::Pass);
    let path = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).find(|p| p.to_string_lossy().contains("rmatrix-A1")).unwrap();
    let mut entry: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    entry["value"]["rhat"] = serde_json::to_value(flip::<Scalar>(3)).unwrap();
    std::fs::write(&path, entry.to_string()).unwrap();
    let rep = run(&cfg, None);
    let body = rep.body();
    assert_eq!(rep.verdict, Status::Fail);
    assert_eq!(rep.exit_code(), 1);
    assert_eq!(stage(&body, "build")["status"], "pass");
    assert_eq!(stage(&body, "rmatrix")["status"], "fail");
    for s in ["intertwiners", "verify", "r2", "hilbert", "antipode", "span"] {
        assert_eq!(stage(&body, s)["status"], "skipped", "{s}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "type = \"A2\"\nq = \"-3\"\ndegree = 3\nspan-depth = 5\n").unwrap();
    let file = ConfigFile::read(&path).unwrap();
    let cfg = RunConfig::resolve(file.overlay(ConfigFile { cartan: Some("A1".into()), ..Default::default() })).unwrap();
    assert_eq!(cfg.cartan.to_string(), "A1");
    assert_eq!(cfg.q.to_string(), "-3");
    assert_eq!((cfg.degree, cfg.truncation, cfg.span_depth), (3, 4, 5));
    let a2 = RunConfig::resolve(ConfigFile { cartan: Some("A2".into()), degree: Some(2), ..Default::default() }).unwrap();
    assert_eq!(a2.truncation, 3);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        ConfigFile { q: Some("0".into()), ..Default::default() },
        ConfigFile { q: Some("two".into()), ..Default::default() },
        ConfigFile { degree: Some(5), truncation: Some(4), ..Default::default() },
        ConfigFile { cartan: Some("E8".into()), ..Default::default() },
        ConfigFile { relations: Some("r2".into()), ..Default::default() },
        ConfigFile { word_budget: Some(0), ..Default::default() },
        ConfigFile { jobs: Some(0), ..Default::default() },
    ];
    for f in bad {
        assert!(RunConfig::resolve(f.clone()).is_err(), "{f:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "kind = \"A1\"\n").unwrap();
    assert!(ConfigFile::read(&path).is_err());
}

#[test]
fn exit_codes() {
    assert_eq!(qpres(&["build", "--type", "A1", "--q", "2"]).0, 0);
    assert_eq!(qpres(&["build", "--q", "0"]).0, 2);
    assert_eq!(qpres(&["build", "--degree", "6", "--truncation", "4"]).0, 2);
    let args = ["hilbert", "--type", "A1", "--q", "-3", "--degree", "1", "--word-budget", "10"];
    let (code, out) = qpres(&args);
    assert_eq!(code, 3);
    let body: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(body["verdict"], "inconclusive");
    assert_eq!(stage(&body, "hilbert")["status"], "inconclusive");
    let mut allowed = args.to_vec();
    allowed.push("--allow-inconclusive");
    assert_eq!(qpres(&allowed).0, 0);
}

#[test]
fn exported_artifacts_verify_on_their_own() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("a1");
    let cache = dir.path().join("cache");
    let (code, _) = qpres(&["export", art.to_str().unwrap(), "--type", "A1", "--cache-dir", cache.to_str().unwrap()]);
    assert_eq!(code, 0);
    for (name, shape) in [("R", (9, 9)), ("L", (3, 9)), ("A", (3, 3)), ("B_dual", (9, 1)), ("L_dual", (9, 3)), ("u", (3, 3))] {
        let m: Mat<Scalar> = serde_json::from_str(&std::fs::read_to_string(art.join(format!("{name}.json"))).unwrap()).unwrap();
        assert_eq!(m.shape(), shape, "{name}");
    }
    let (code, out) = qpres(&["verify", "--artifacts", art.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let body: Value = serde_json::from_str(&out).unwrap();
    assert!(stage(&body, "verify-artifacts")["checks"].as_array().unwrap().len() >= 10);

    let path = art.join("L.json");
    let mut l: Mat<Scalar> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let x = l.get(0, 0);
    l.set(0, 0, x.add(&Scalar::q()));
    std::fs::write(&path, serde_json::to_string(&l).unwrap()).unwrap();
    let (code, out) = qpres(&["verify", "--artifacts", art.to_str().unwrap()]);
    assert_eq!(code, 1);
    let body: Value = serde_json::from_str(&out).unwrap();
    let failed: Vec<&str> = stage(&body, "verify-artifacts")["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"L is a module map"), "{failed:?}");
}
