//! Sandboxed curriculum edits.
//!
//! A [`WhatIfDelta`] creates outcomes and adds or removes outcome targets.
//! [`whatif`] applies it as an overlay on the teaching index and compares
//! gap reports; [`materialize`] applies the same edits to a copy of the
//! model. The two must agree.
//!
//! Edits apply in a fixed order: creations, then removals, then additions.
//! Adding a target for a topic the outcome already targets keeps the higher
//! of the two levels. Removals must name an existing target exactly, and no
//! outcome may end up without targets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::coverage::{Analyzer, CoverageOptions, Fraction, GapReport, OutcomeTeaching, Teaching};
use crate::diag::{sort_diagnostics, DiagCode, Diagnostic, SourceSpan};
use crate::dsl::{parser::Parser, write_str_literal};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeKind};
use crate::model::{BloomLevel, LearningOutcome, Model, OutcomeRef, TopicRequirement};
use crate::validate::{is_slug, validate_doc};

#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeCreation {
    pub course: String,
    pub outcome: String,
    #[serde(default)]
    pub statement: String,
    #[serde(skip)]
    pub span: Option<SourceSpan>,
}

impl PartialEq for OutcomeCreation {
    fn eq(&self, other: &Self) -> bool {
        (&self.course, &self.outcome, &self.statement)
            == (&other.course, &other.outcome, &other.statement)
    }
}

#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetEdit {
    pub course: String,
    pub outcome: String,
    pub topic: String,
    pub level: BloomLevel,
    #[serde(skip)]
    pub span: Option<SourceSpan>,
}

impl TargetEdit {
    pub fn new(course: &str, outcome: &str, topic: &str, level: BloomLevel) -> Self {
        TargetEdit {
            course: course.to_string(),
            outcome: outcome.to_string(),
            topic: topic.to_string(),
            level,
            span: None,
        }
    }

    fn outcome_ref(&self) -> OutcomeRef {
        OutcomeRef::new(&self.course, &self.outcome)
    }
}

impl PartialEq for TargetEdit {
    fn eq(&self, other: &Self) -> bool {
        (&self.course, &self.outcome, &self.topic, self.level)
            == (&other.course, &other.outcome, &other.topic, other.level)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfDelta {
    #[serde(default)]
    pub create: Vec<OutcomeCreation>,
    #[serde(default)]
    pub add: Vec<TargetEdit>,
    #[serde(default)]
    pub remove: Vec<TargetEdit>,
}

impl WhatIfDelta {
    pub fn is_empty(&self) -> bool {
        self.create.is_empty() && self.add.is_empty() && self.remove.is_empty()
    }

    /// Parses a `.cdsl` delta fragment.
    pub fn parse_dsl(text: &str, file: &str) -> Result<WhatIfDelta, Vec<Diagnostic>> {
        let mut parser = Parser::new(text, file);
        let delta = parser.parse_delta();
        if parser.diags.is_empty() {
            Ok(delta)
        } else {
            let mut diags = parser.diags;
            sort_diagnostics(&mut diags);
            Err(diags)
        }
    }

    pub fn from_json(text: &str) -> Result<WhatIfDelta, Vec<Diagnostic>> {
        serde_json::from_str(text).map_err(|e| {
            let line = e.line().max(1) as u32;
            let col = e.column().max(1) as u32;
            vec![Diagnostic::error(
                DiagCode::Json,
                SourceSpan::new("<delta>", line, col, line, col + 1),
                e.to_string(),
            )]
        })
    }

    /// Accepts either form: a body starting with `{` is JSON, anything else
    /// is a DSL fragment.
    pub fn parse_any(text: &str, file: &str) -> Result<WhatIfDelta, Vec<Diagnostic>> {
        if text.trim_start().starts_with('{') {
            WhatIfDelta::from_json(text)
        } else {
            WhatIfDelta::parse_dsl(text, file)
        }
    }

    /// Renders the delta as a DSL fragment that parses back to `self`.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for c in &self.create {
            write!(out, "create {}/{}", c.course, c.outcome).unwrap();
            if !c.statement.is_empty() {
                out.push(' ');
                write_str_literal(&mut out, &c.statement);
            }
            out.push('\n');
        }
        for r in &self.remove {
            writeln!(
                out,
                "remove {}/{} {} @ {}",
                r.course, r.outcome, r.topic, r.level
            )
            .unwrap();
        }
        for a in &self.add {
            writeln!(
                out,
                "add {}/{} {} @ {}",
                a.course, a.outcome, a.topic, a.level
            )
            .unwrap();
        }
        out
    }

    /// Resolves the delta against `graph`, returning the final teaching of
    /// every touched outcome.
    fn resolve(&self, graph: &Graph, base: &Teaching) -> Result<Resolved> {
        let mut diags = Vec::new();
        let span = |s: &Option<SourceSpan>| {
            s.clone()
                .unwrap_or_else(|| SourceSpan::synthetic("<delta>"))
        };
        let mut touched: BTreeMap<OutcomeRef, OutcomeTeaching> = BTreeMap::new();
        let mut created = Vec::new();

        for c in &self.create {
            let r = OutcomeRef::new(&c.course, &c.outcome);
            if !graph.contains(NodeKind::Course, &c.course) {
                diags.push(Diagnostic::error(
                    DiagCode::DeltaUnresolved,
                    span(&c.span),
                    format!("unknown course `{}`", c.course),
                ));
            } else if !is_slug(&c.outcome) {
                diags.push(Diagnostic::error(
                    DiagCode::DeltaUnresolved,
                    span(&c.span),
                    format!("`{}` is not a valid outcome id", c.outcome),
                ));
            } else if base.outcome(&r).is_some() || touched.contains_key(&r) {
                diags.push(Diagnostic::error(
                    DiagCode::DeltaUnresolved,
                    span(&c.span),
                    format!("outcome `{r}` already exists"),
                ));
            } else {
                touched.insert(r.clone(), OutcomeTeaching::default());
                created.push((r, c.statement.clone()));
            }
        }

        let mut lookup = |e: &TargetEdit, diags: &mut Vec<Diagnostic>| -> Option<OutcomeRef> {
            let r = e.outcome_ref();
            if !graph.contains(NodeKind::Topic, &e.topic) {
                diags.push(Diagnostic::error(
                    DiagCode::DeltaUnresolved,
                    span(&e.span),
                    format!("unknown topic `{}`", e.topic),
                ));
                return None;
            }
            if !touched.contains_key(&r) {
                match base.outcome(&r) {
                    Some(t) => {
                        touched.insert(r.clone(), t.clone());
                    }
                    None => {
                        diags.push(Diagnostic::error(
                            DiagCode::DeltaUnresolved,
                            span(&e.span),
                            format!("unknown outcome `{r}`"),
                        ));
                        return None;
                    }
                }
            }
            Some(r)
        };

        let mut resolved_removals = Vec::new();
        for e in &self.remove {
            if let Some(r) = lookup(e, &mut diags) {
                resolved_removals.push((r, e));
            }
        }
        let mut resolved_adds = Vec::new();
        for e in &self.add {
            if let Some(r) = lookup(e, &mut diags) {
                resolved_adds.push((r, e));
            }
        }

        for (r, e) in resolved_removals {
            let t = touched.get_mut(&r).expect("looked up");
            if t.targets.get(&e.topic) == Some(&e.level) {
                t.targets.remove(&e.topic);
            } else {
                diags.push(Diagnostic::error(
                    DiagCode::DeltaUnresolved,
                    span(&e.span),
                    format!("outcome `{r}` has no target {} @ {}", e.topic, e.level),
                ));
            }
        }
        for (r, e) in resolved_adds {
            let t = touched.get_mut(&r).expect("looked up");
            let level = t.targets.entry(e.topic.clone()).or_insert(e.level);
            *level = (*level).max(e.level);
        }

        if diags.is_empty() {
            for (r, t) in &touched {
                if t.targets.is_empty() {
                    diags.push(Diagnostic::error(
                        DiagCode::DeltaUnresolved,
                        SourceSpan::synthetic("<delta>"),
                        format!("outcome `{r}` would be left without targets"),
                    ));
                }
            }
        }
        if !diags.is_empty() {
            sort_diagnostics(&mut diags);
            return Err(Error::DeltaUnresolved(diags));
        }
        Ok(Resolved { touched, created })
    }
}

struct Resolved {
    touched: BTreeMap<OutcomeRef, OutcomeTeaching>,
    created: Vec<(OutcomeRef, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionChange {
    pub competency: String,
    pub before: Fraction,
    pub after: Fraction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhatIfResult {
    pub before: GapReport,
    pub after: GapReport,
    pub changed: Vec<FractionChange>,
}

/// The teaching index of `graph` with `delta` applied.
pub fn overlay(graph: &Graph, delta: &WhatIfDelta) -> Result<Teaching> {
    let base = Teaching::from_graph(graph);
    let resolved = delta.resolve(graph, &base)?;
    Ok(base.with_outcomes(resolved.touched))
}

/// Gap reports before and after `delta`, plus every competency whose topic
/// fraction moved. Neither the graph nor its model is modified.
pub fn whatif(graph: &Graph, delta: &WhatIfDelta) -> Result<WhatIfResult> {
    whatif_with(graph, delta, CoverageOptions::default())
}

pub fn whatif_with(
    graph: &Graph,
    delta: &WhatIfDelta,
    options: CoverageOptions,
) -> Result<WhatIfResult> {
    let before = Analyzer::new(graph).options(options);
    let after = Analyzer::with_teaching(graph, overlay(graph, delta)?).options(options);
    let changed = before
        .all_reports()
        .into_iter()
        .zip(after.all_reports())
        .filter(|(b, a)| b.topic_fraction != a.topic_fraction)
        .map(|(b, a)| FractionChange {
            competency: b.competency,
            before: b.topic_fraction,
            after: a.topic_fraction,
        })
        .collect();
    Ok(WhatIfResult {
        before: before.gap_report(),
        after: after.gap_report(),
        changed,
    })
}

/// A new model with `delta` written into its courses.
pub fn materialize(model: &Model, delta: &WhatIfDelta) -> Result<Model> {
    let graph = Graph::build(model);
    let base = Teaching::from_graph(&graph);
    let resolved = delta.resolve(&graph, &base)?;
    let statements: BTreeMap<&OutcomeRef, &str> = resolved
        .created
        .iter()
        .map(|(r, s)| (r, s.as_str()))
        .collect();

    let mut doc = model.doc().clone();
    for (r, t) in &resolved.touched {
        let course = doc
            .courses
            .iter_mut()
            .find(|c| c.id == r.course)
            .expect("resolved course");
        let outcome = match course.outcomes.iter().position(|o| o.id == r.outcome) {
            Some(i) => &mut course.outcomes[i],
            None => {
                course.outcomes.push(LearningOutcome {
                    id: r.outcome.clone(),
                    statement: statements.get(r).copied().unwrap_or_default().to_string(),
                    targets: Vec::new(),
                    skills_exercised: BTreeSet::new(),
                    dispositions_exercised: BTreeSet::new(),
                });
                course.outcomes.last_mut().expect("just pushed")
            }
        };
        // Keep surviving targets in place, append new ones in topic order.
        outcome
            .targets
            .retain(|req| t.targets.contains_key(&req.topic));
        for req in &mut outcome.targets {
            req.level = t.targets[&req.topic];
        }
        let present: BTreeSet<String> = outcome.targets.iter().map(|r| r.topic.clone()).collect();
        for (topic, &level) in &t.targets {
            if !present.contains(topic) {
                outcome.targets.push(TopicRequirement::new(topic, level));
            }
        }
    }
    validate_doc(&doc, "<materialized>").map_err(Error::Invalid)
}
