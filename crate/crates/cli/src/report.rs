//! Reports: stage results in a deterministic body, timings and cache traffic kept apart.

use crate::config::RunConfig;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Skipped,
    Inconclusive,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status, detail: detail.into() }
    }

    pub fn bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

impl StageReport {
    pub fn new(stage: &str, checks: Vec<Check>, data: serde_json::Value) -> Self {
        let status = checks.iter().map(|c| c.status).filter(|s| *s != Status::Skipped).max().unwrap_or(Status::Pass);
        StageReport { stage: stage.into(), status, checks, data }
    }

    pub fn skipped(stage: &str, why: &str) -> Self {
        StageReport { stage: stage.into(), status: Status::Skipped, checks: vec![Check::new("stage", Status::Skipped, why)], data: serde_json::Value::Null }
    }

    pub fn error(stage: &str, err: &anyhow::Error) -> Self {
        StageReport { stage: stage.into(), status: Status::Fail, checks: vec![Check::new("stage", Status::Fail, format!("{err:#}"))], data: serde_json::Value::Null }
    }
}

/// Non-deterministic facts about one run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunInfo {
    /// Milliseconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub cache_hits: Vec<String>,
    pub cache_writes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub code_version: String,
    pub convention: String,
    pub stages: Vec<StageReport>,
    pub verdict: Status,
    pub run: RunInfo,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            config,
            code_version: env!("CARGO_PKG_VERSION").into(),
            convention: qpres::braiding::CONVENTION.into(),
            stages: Vec::new(),
            verdict: Status::Pass,
            run: RunInfo::default(),
        }
    }

    pub fn push(&mut self, stage: StageReport) {
        if stage.status != Status::Skipped {
            self.verdict = self.verdict.max(stage.status);
        }
        self.stages.push(stage);
    }

    /// The report without its `run` section, for comparisons across runs.
    pub fn body(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("run");
        v
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Status::Pass | Status::Skipped => 0,
            Status::Inconclusive if self.config.allow_inconclusive => 0,
            Status::Inconclusive => 3,
            Status::Fail => 1,
        }
    }
}
