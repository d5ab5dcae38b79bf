//! Queries shared by the CLI's `--json` output and the HTTP service, so
//! both produce the same documents.

use std::path::{Path, PathBuf};

use cforge_core::coverage::{Analyzer, CoverageOptions};
use cforge_core::io::{self, Loaded};
use cforge_core::portfolio::{attainment, cohort_stats};
use cforge_core::whatif::{whatif_with, WhatIfDelta};
use cforge_core::{DiagCode, Diagnostic, Error, Graph, Model, SourceSpan};
use chrono::{DateTime, Utc};
use serde::Serialize;
use serde_json::{json, Value};

/// An immutable, fully analysed model.
#[derive(Debug)]
pub struct Snapshot {
    pub model: Model,
    pub graph: Graph,
    pub warnings: Vec<Diagnostic>,
    pub loaded_from: PathBuf,
    pub loaded_at: DateTime<Utc>,
}

impl Snapshot {
    pub fn load(path: &Path) -> Result<Snapshot, Error> {
        let Loaded { model, warnings } = io::load(path)?;
        Ok(Snapshot::new(model, warnings, path))
    }

    pub fn new(model: Model, warnings: Vec<Diagnostic>, path: &Path) -> Snapshot {
        let graph = Graph::build(&model);
        Snapshot {
            model,
            graph,
            warnings,
            loaded_from: path.to_path_buf(),
            loaded_at: Utc::now(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    NotFound,
    Unprocessable,
    Internal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryError {
    pub kind: Failure,
    pub diagnostics: Vec<Diagnostic>,
}

impl QueryError {
    pub fn unprocessable(diagnostics: Vec<Diagnostic>) -> Self {
        QueryError {
            kind: Failure::Unprocessable,
            diagnostics,
        }
    }

    pub fn body(&self) -> Value {
        json!({ "diagnostics": self.diagnostics })
    }
}

impl From<Error> for QueryError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::UnknownId { .. } => Failure::NotFound,
            Error::Io { .. } => Failure::Internal,
            _ => Failure::Unprocessable,
        };
        QueryError {
            kind,
            diagnostics: e.diagnostics(),
        }
    }
}

pub type QueryResult = Result<Value, QueryError>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn analyzer(snap: &Snapshot, options: CoverageOptions) -> Analyzer<'_> {
    Analyzer::new(&snap.graph).options(options)
}

/// Element counts of a model.
pub fn counts(model: &Model) -> Value {
    json!({
        "blocks": model.blocks.len(),
        "competencies": model.competencies().count(),
        "areas": model.areas().count(),
        "topics": model.topics().count(),
        "skills": model.skills().count(),
        "dispositions": model.dispositions().count(),
        "courses": model.courses.len(),
        "outcomes": model.courses.iter().map(|c| c.outcomes.len()).sum::<usize>(),
        "paths": model.paths.len(),
        "objects": model.objects.len(),
        "pathways": model.pathways.len(),
        "students": model.portfolios.len(),
    })
}

pub fn validation(snap: &Snapshot) -> Value {
    json!({ "ok": true, "counts": counts(&snap.model), "warnings": snap.warnings })
}

pub fn summary(snap: &Snapshot) -> Value {
    json!({
        "counts": counts(&snap.model),
        "warnings": snap.warnings,
        "loaded_from": snap.loaded_from.display().to_string(),
        "loaded_at": snap.loaded_at.to_rfc3339(),
    })
}

pub fn competencies(snap: &Snapshot) -> Value {
    let mut list: Vec<Value> = snap
        .model
        .competencies()
        .map(|c| {
            json!({
                "id": c.id,
                "block": c.block,
                "statement": c.statement,
                "topic_requirements": c.topic_reqs.len(),
                "skills": c.skill_reqs,
                "dispositions": c.disposition_reqs,
            })
        })
        .collect();
    list.sort_by(|a, b| a["id"].as_str().cmp(&b["id"].as_str()));
    Value::Array(list)
}

pub fn coverage(snap: &Snapshot, competency: &str, options: CoverageOptions) -> QueryResult {
    Ok(to_value(
        &analyzer(snap, options).competency_coverage(competency)?,
    ))
}

pub fn coverage_all(snap: &Snapshot, options: CoverageOptions) -> Value {
    to_value(&analyzer(snap, options).all_reports())
}

pub fn matrix(snap: &Snapshot, options: CoverageOptions) -> Value {
    to_value(&analyzer(snap, options).coverage_matrix())
}

pub fn trace_topic(snap: &Snapshot, topic: &str) -> QueryResult {
    let hits = snap.graph.trace_forward(topic)?;
    Ok(json!({ "topic": topic, "competencies": hits }))
}

pub fn trace_competency(snap: &Snapshot, competency: &str) -> QueryResult {
    Ok(to_value(&snap.graph.trace_backward(competency)?))
}

pub fn gaps(snap: &Snapshot, options: CoverageOptions) -> Value {
    to_value(&analyzer(snap, options).gap_report())
}

pub fn pathway(snap: &Snapshot, id: &str, options: CoverageOptions) -> QueryResult {
    Ok(to_value(&analyzer(snap, options).pathway_profile(id)?))
}

pub fn parse_delta(text: &str, file: &str) -> Result<WhatIfDelta, QueryError> {
    WhatIfDelta::parse_any(text, file).map_err(QueryError::unprocessable)
}

pub fn whatif(snap: &Snapshot, delta: &WhatIfDelta, options: CoverageOptions) -> QueryResult {
    Ok(to_value(&whatif_with(&snap.graph, delta, options)?))
}

pub fn attainment_of(snap: &Snapshot, student: &str, competency: &str) -> QueryResult {
    let portfolio = snap
        .model
        .portfolio(student)
        .ok_or_else(|| Error::unknown("student", student))?;
    Ok(to_value(&attainment(&snap.graph, portfolio, competency)?))
}

pub fn stats(snap: &Snapshot) -> Value {
    to_value(&cohort_stats(&snap.model.portfolios))
}

/// A single error diagnostic outside any source file.
pub fn usage_diagnostic(code: DiagCode, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(code, SourceSpan::synthetic("<request>"), message)
}
