use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qpres_cli::artifacts;
use qpres_cli::cache::Cache;
use qpres_cli::pipeline::{self, Stage};
use qpres_cli::report::Report;
use qpres_cli::{ConfigFile, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qpres", version, about = "Quantum-group data and presentation certificates for small simple types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// TOML file with any of the options below; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// A1, A2, B2 or G2.
    #[arg(long = "type", global = true)]
    cartan: Option<String>,
    /// `generic` or an exact rational q0.
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// r1r3inv or r1r2r3.
    #[arg(long, global = true)]
    relations: Option<String>,
    #[arg(long, global = true)]
    span_depth: Option<usize>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Maximum number of words of length at most D'.
    #[arg(long, global = true)]
    word_budget: Option<u64>,
    #[arg(long, global = true)]
    allow_inconclusive: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the adjoint module.
    Build,
    /// Compute the R-matrix.
    Rmatrix,
    /// Build and normalize L, B, B', L'.
    Intertwiners,
    /// Check every generating morphism, or verify exported artifacts.
    Verify {
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Filtered dimensions of the truncated algebra.
    Hilbert,
    /// Antipode identities on the evaluation space.
    Antipode,
    /// Depth-limited spanning of Hom spaces by composites.
    Span,
    /// Run every stage.
    Report,
    /// Write the generic matrices as JSON.
    Export { dir: PathBuf },
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => ConfigFile::read(p)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            cartan: self.cartan.clone(),
            q: self.q.clone(),
            degree: self.degree,
            truncation: self.truncation,
            relations: self.relations.clone(),
            span_depth: self.span_depth,
            cache_dir: self.cache_dir.clone(),
            out: self.out.clone(),
            jobs: self.jobs,
            word_budget: self.word_budget,
            allow_inconclusive: self.allow_inconclusive.then_some(true),
        };
        RunConfig::resolve(base.overlay(flags))
    }
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match &cfg.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    for s in &report.stages {
        eprintln!("{:<13} {:?}", s.stage, s.status);
    }
    eprintln!("verdict       {:?}", report.verdict);
    Ok(())
}

fn export(cfg: &RunConfig, dir: &PathBuf) -> Result<()> {
    let mut cache = Cache::new(cfg.cache_dir.as_deref());
    let mut s = pipeline::load_setup(cfg.cartan, &mut cache)?;
    let br = pipeline::generic_braiding(&mut s, &mut cache)?;
    let pack = pipeline::generic_pack(&mut s, &mut cache)?;
    let m = artifacts::export(dir, &s.v, &br.r, &br.u, &pack)?;
    println!("{}", serde_json::to_string_pretty(&m)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.flags.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(j) = cfg.jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let target = match &cli.command {
        Command::Build => Some(Stage::Build),
        Command::Rmatrix => Some(Stage::Rmatrix),
        Command::Intertwiners => Some(Stage::Intertwiners),
        Command::Verify { .. } => Some(Stage::Verify),
        Command::Hilbert => Some(Stage::Hilbert),
        Command::Antipode => Some(Stage::Antipode),
        Command::Span => Some(Stage::Span),
        Command::Report => None,
        Command::Export { dir } => {
            return match export(&cfg, dir) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("export failed: {e:#}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let report = match &cli.command {
        Command::Verify { artifacts: Some(dir) } => {
            let mut r = Report::new(cfg.clone());
            match artifacts::verify_dir(dir) {
                Ok(s) => r.push(s),
                Err(e) => r.push(qpres_cli::report::StageReport::error("verify-artifacts", &e)),
            }
            r
        }
        _ => pipeline::run(&cfg, target),
    };
    if let Err(e) = emit(&cfg, &report) {
        eprintln!("{e:#}");
        return ExitCode::from(1);
    }
    match report.exit_code() {
        0 => ExitCode::SUCCESS,
        c => ExitCode::from(c as u8),
    }
}
