//! Run configuration: a TOML file, overridden by command-line flags.

use anyhow::{bail, Context, Result};
use qpres::presentation::{Selector, DEFAULT_WORD_BUDGET};
use qpres::roots::CartanType;
use qpres::Rational;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Work over ℚ(q), or over ℚ after `q -> q0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMode {
    Generic,
    At(Rational),
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QMode::Generic => f.write_str("generic"),
            QMode::At(q0) => write!(f, "{q0}"),
        }
    }
}

impl FromStr for QMode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "generic" {
            return Ok(QMode::Generic);
        }
        let q0: Rational = s.parse().map_err(|_| anyhow::anyhow!("`{s}` is neither `generic` nor a rational number"))?;
        Ok(QMode::At(q0))
    }
}

impl QMode {
    pub fn point(&self) -> Option<&Rational> {
        match self {
            QMode::Generic => None,
            QMode::At(q0) => Some(q0),
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, QMode::At(q0) if *q0 == Rational::from_integer(1.into()))
    }
}

/// All keys optional; anything missing falls back to the defaults of [`RunConfig`].
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    #[serde(rename = "type")]
    pub cartan: Option<String>,
    pub q: Option<String>,
    pub degree: Option<usize>,
    pub truncation: Option<usize>,
    pub relations: Option<String>,
    pub span_depth: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub word_budget: Option<u64>,
    pub allow_inconclusive: Option<bool>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `other` wins wherever it is set.
    pub fn overlay(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            cartan: other.cartan.or(self.cartan),
            q: other.q.or(self.q),
            degree: other.degree.or(self.degree),
            truncation: other.truncation.or(self.truncation),
            relations: other.relations.or(self.relations),
            span_depth: other.span_depth.or(self.span_depth),
            cache_dir: other.cache_dir.or(self.cache_dir),
            out: other.out.or(self.out),
            jobs: other.jobs.or(self.jobs),
            word_budget: other.word_budget.or(self.word_budget),
            allow_inconclusive: other.allow_inconclusive.or(self.allow_inconclusive),
        }
    }
}

fn display<T: fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// The resolved configuration, echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    #[serde(rename = "type", serialize_with = "display")]
    pub cartan: CartanType,
    #[serde(serialize_with = "display")]
    pub q: QMode,
    pub degree: usize,
    pub truncation: usize,
    #[serde(serialize_with = "display")]
    pub relations: Selector,
    pub span_depth: usize,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub word_budget: u64,
    pub allow_inconclusive: bool,
}

/// `D' = 4` for A1 up to degree 3, one more than the degree otherwise.
pub fn default_truncation(cartan: CartanType, degree: usize) -> usize {
    match cartan {
        CartanType::A1 if degree <= 3 => 4,
        _ => degree + 1,
    }
}

impl RunConfig {
    pub fn resolve(file: ConfigFile) -> Result<Self> {
        let cartan: CartanType = file.cartan.as_deref().unwrap_or("A1").parse()?;
        let q: QMode = file.q.as_deref().unwrap_or("generic").parse()?;
        let degree = file.degree.unwrap_or(2);
        let truncation = file.truncation.unwrap_or_else(|| default_truncation(cartan, degree));
        let relations: Selector = file.relations.as_deref().unwrap_or("r1r3inv").parse()?;
        let cfg = RunConfig {
            cartan,
            q,
            degree,
            truncation,
            relations,
            span_depth: file.span_depth.unwrap_or(4),
            cache_dir: file.cache_dir,
            out: file.out,
            jobs: file.jobs,
            word_budget: file.word_budget.unwrap_or(DEFAULT_WORD_BUDGET),
            allow_inconclusive: file.allow_inconclusive.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if let QMode::At(q0) = &self.q {
            if *q0 == Rational::from_integer(0.into()) {
                bail!("q0 = 0 is not allowed");
            }
        }
        if self.degree == 0 {
            bail!("degree must be positive");
        }
        if self.degree > self.truncation {
            bail!("degree {} exceeds truncation {}", self.degree, self.truncation);
        }
        if self.span_depth == 0 || self.word_budget == 0 || self.jobs == Some(0) {
            bail!("budgets must be positive");
        }
        Ok(())
    }
}
