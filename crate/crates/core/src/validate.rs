//! Structural validation: turns a [`Draft`] into an immutable [`Model`].
//!
//! All problems are collected rather than stopping at the first one. Every
//! diagnostic carries the span of the declaration or reference at fault.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use chrono::NaiveDate;

use crate::diag::{sort_diagnostics, DiagCode, Diagnostic, SourceSpan};
use crate::draft::*;
use crate::model::*;

/// Plain slug: ASCII alphanumerics plus `_`, `-` and `.`, starting with an
/// alphanumeric.
pub fn is_slug(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Dotted numeric code such as `1.1` or `4.12`.
pub fn is_competency_id(s: &str) -> bool {
    let parts: Vec<&str> = s.split('.').collect();
    parts.len() >= 2
        && parts
            .iter()
            .all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()))
}

struct Checker {
    diags: Vec<Diagnostic>,
}

impl Checker {
    fn err(&mut self, code: DiagCode, span: &SourceSpan, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(code, span.clone(), msg));
    }

    fn slug(&mut self, kind: &str, id: &str, span: &SourceSpan) {
        if !is_slug(id) {
            self.err(
                DiagCode::Parse,
                span,
                format!("{kind} id `{id}` is not a slug (letters, digits, `_`, `-`, `.`)"),
            );
        }
    }

    /// Records `id` in `seen`, reporting a collision with an earlier entry.
    fn unique<'a>(
        &mut self,
        seen: &mut HashMap<String, &'a SourceSpan>,
        kind: &str,
        id: &str,
        span: &'a SourceSpan,
    ) {
        if let Some(first) = seen.get(id) {
            let msg = format!("{kind} `{id}` is already declared at {first}");
            self.err(DiagCode::DupId, span, msg);
        } else {
            seen.insert(id.to_string(), span);
        }
    }

    fn resolve(&mut self, known: &HashSet<&str>, kind: &str, id: &str, span: &SourceSpan) {
        if !known.contains(id) {
            self.err(
                DiagCode::DanglingRef,
                span,
                format!("unknown {kind} `{id}`"),
            );
        }
    }
}

/// Validates `draft`. Returns the model iff there are no errors; otherwise
/// every diagnostic found, sorted by position.
pub fn validate(draft: &Draft) -> Result<Model, Vec<Diagnostic>> {
    let mut ck = Checker { diags: Vec::new() };

    // Catalog namespaces.
    let mut catalog_names = HashMap::new();
    let mut area_ids = HashMap::new();
    let mut topic_ids = HashMap::new();
    let mut skill_ids = HashMap::new();
    let mut disposition_ids = HashMap::new();
    for cat in &draft.catalogs {
        ck.unique(&mut catalog_names, "catalog", &cat.name, &cat.span);
        for area in &cat.areas {
            ck.slug("area", &area.id, &area.span);
            ck.unique(&mut area_ids, "knowledge area", &area.id, &area.span);
            if area.topics.is_empty() {
                ck.err(
                    DiagCode::Empty,
                    &area.span,
                    format!("knowledge area `{}` has no topics", area.id),
                );
            }
            for topic in &area.topics {
                let slug_ok = topic
                    .id
                    .strip_prefix(&area.id)
                    .and_then(|rest| rest.strip_prefix('/'))
                    .is_some_and(is_slug);
                if !slug_ok {
                    ck.err(
                        DiagCode::Parse,
                        &topic.span,
                        format!("topic id `{}` must be `{}/<slug>`", topic.id, area.id),
                    );
                }
                ck.unique(&mut topic_ids, "topic", &topic.id, &topic.span);
            }
        }
        for skill in &cat.skills {
            ck.slug("skill", &skill.id, &skill.span);
            ck.unique(&mut skill_ids, "skill", &skill.id, &skill.span);
        }
        for disp in &cat.dispositions {
            ck.slug("disposition", &disp.id, &disp.span);
            ck.unique(&mut disposition_ids, "disposition", &disp.id, &disp.span);
        }
    }
    let topics: HashSet<&str> = topic_ids.keys().map(String::as_str).collect();
    let skills: HashSet<&str> = skill_ids.keys().map(String::as_str).collect();
    let dispositions: HashSet<&str> = disposition_ids.keys().map(String::as_str).collect();

    // Blocks and competencies.
    let mut block_ids = HashMap::new();
    for block in &draft.blocks {
        if block.id < 1 || block.id > u32::MAX as i64 {
            ck.err(
                DiagCode::Range,
                &block.span,
                format!("block number {} must be a positive integer", block.id),
            );
        }
        ck.unique(&mut block_ids, "block", &block.id.to_string(), &block.span);
    }
    let mut competency_ids = HashMap::new();
    let mut block_sizes: HashMap<i64, usize> = HashMap::new();
    for comp in &draft.competencies {
        ck.unique(&mut competency_ids, "competency", &comp.id, &comp.span);
        if !is_competency_id(&comp.id) {
            ck.err(
                DiagCode::Parse,
                &comp.span,
                format!(
                    "competency id `{}` must be a dotted code such as `1.1`",
                    comp.id
                ),
            );
        }
        let block_key = comp.block.value.to_string();
        if block_ids.contains_key(&block_key) {
            *block_sizes.entry(comp.block.value).or_default() += 1;
        } else {
            ck.err(
                DiagCode::DanglingRef,
                &comp.block.span,
                format!("unknown block `{}`", comp.block.value),
            );
        }
        if comp.id.split('.').next() != Some(block_key.as_str()) {
            ck.err(
                DiagCode::BlockMismatch,
                &comp.span,
                format!(
                    "competency `{}` is declared in block {} but its code belongs to another block",
                    comp.id, comp.block.value
                ),
            );
        }
        if comp.reqs.is_empty() {
            ck.err(
                DiagCode::EmptyReqs,
                &comp.span,
                format!("competency `{}` has no topic requirements", comp.id),
            );
        }
        let mut seen_topics = HashSet::new();
        for req in &comp.reqs {
            ck.resolve(&topics, "topic", &req.value.topic, &req.span);
            if !seen_topics.insert(req.value.topic.as_str()) {
                ck.err(
                    DiagCode::DupTopic,
                    &req.span,
                    format!(
                        "topic `{}` is required more than once by competency `{}`",
                        req.value.topic, comp.id
                    ),
                );
            }
        }
        for s in &comp.skills {
            ck.resolve(&skills, "skill", &s.value, &s.span);
        }
        for d in &comp.dispositions {
            ck.resolve(&dispositions, "disposition", &d.value, &d.span);
        }
    }
    for block in &draft.blocks {
        if !block_sizes.contains_key(&block.id) {
            ck.err(
                DiagCode::Empty,
                &block.span,
                format!("block {} has no competencies", block.id),
            );
        }
    }

    // Learning objects and paths need the outcome namespace, so courses first.
    let mut course_ids = HashMap::new();
    let mut outcome_refs: HashSet<OutcomeRef> = HashSet::new();
    for course in &draft.courses {
        ck.slug("course", &course.id, &course.span);
        ck.unique(&mut course_ids, "course", &course.id, &course.span);
        match &course.year {
            None => ck.err(
                DiagCode::MissingField,
                &course.span,
                format!("course `{}` has no `year`", course.id),
            ),
            Some(y) if !(1..=5).contains(&y.value) => ck.err(
                DiagCode::Range,
                &y.span,
                format!("year {} is outside 1..5", y.value),
            ),
            _ => {}
        }
        if let Some(e) = &course.ects {
            if e.value < 0.0 || !e.value.is_finite() {
                ck.err(
                    DiagCode::Range,
                    &e.span,
                    format!("ECTS value {} must be non-negative", e.value),
                );
            }
        }
        let mut outcome_ids = HashMap::new();
        for outcome in &course.outcomes {
            ck.slug("outcome", &outcome.id, &outcome.span);
            ck.unique(&mut outcome_ids, "outcome", &outcome.id, &outcome.span);
            outcome_refs.insert(OutcomeRef::new(&course.id, &outcome.id));
            if outcome.targets.is_empty() {
                ck.err(
                    DiagCode::EmptyReqs,
                    &outcome.span,
                    format!("outcome `{}/{}` targets no topic", course.id, outcome.id),
                );
            }
            let mut seen_topics = HashSet::new();
            for t in &outcome.targets {
                ck.resolve(&topics, "topic", &t.value.topic, &t.span);
                if !seen_topics.insert(t.value.topic.as_str()) {
                    ck.err(
                        DiagCode::DupTopic,
                        &t.span,
                        format!(
                            "topic `{}` is targeted more than once by outcome `{}/{}`",
                            t.value.topic, course.id, outcome.id
                        ),
                    );
                }
            }
            for s in &outcome.skills {
                ck.resolve(&skills, "skill", &s.value, &s.span);
            }
            for d in &outcome.dispositions {
                ck.resolve(&dispositions, "disposition", &d.value, &d.span);
            }
        }
    }

    let mut object_ids = HashMap::new();
    for obj in &draft.objects {
        ck.slug("learning object", &obj.id, &obj.span);
        ck.unique(&mut object_ids, "learning object", &obj.id, &obj.span);
        if obj.assessments.is_empty() {
            ck.err(
                DiagCode::Empty,
                &obj.span,
                format!("learning object `{}` has no assessment", obj.id),
            );
        }
        let mut assessment_ids = HashMap::new();
        for a in &obj.assessments {
            ck.slug("assessment", &a.id, &a.span);
            ck.unique(&mut assessment_ids, "assessment", &a.id, &a.span);
            if a.outcomes.is_empty() {
                ck.err(
                    DiagCode::Empty,
                    &a.span,
                    format!("assessment `{}` references no outcome", a.id),
                );
            }
            for r in &a.outcomes {
                if !outcome_refs.contains(&r.value) {
                    ck.err(
                        DiagCode::DanglingRef,
                        &r.span,
                        format!("unknown outcome `{}`", r.value),
                    );
                }
            }
        }
    }
    let objects: HashSet<&str> = object_ids.keys().map(String::as_str).collect();

    let mut path_ids = HashMap::new();
    for path in &draft.paths {
        ck.slug("path", &path.id, &path.span);
        ck.unique(&mut path_ids, "path", &path.id, &path.span);
        if path.stages.is_empty() {
            ck.err(
                DiagCode::Empty,
                &path.span,
                format!("path `{}` has no stages", path.id),
            );
        }
        let mut seen = HashSet::new();
        for stage in &path.stages {
            if stage.value.is_empty() {
                ck.err(
                    DiagCode::Empty,
                    &stage.span,
                    "stage has no learning objects",
                );
            }
            for obj in &stage.value {
                ck.resolve(&objects, "learning object", &obj.value, &obj.span);
                if !seen.insert(obj.value.as_str()) {
                    ck.err(
                        DiagCode::DupId,
                        &obj.span,
                        format!(
                            "learning object `{}` appears more than once in path `{}`",
                            obj.value, path.id
                        ),
                    );
                }
            }
        }
    }
    let paths: HashSet<&str> = path_ids.keys().map(String::as_str).collect();
    for course in &draft.courses {
        for p in &course.paths {
            ck.resolve(&paths, "path", &p.value, &p.span);
        }
    }

    let mut pathway_ids = HashMap::new();
    for pw in &draft.pathways {
        ck.slug("pathway", &pw.id, &pw.span);
        ck.unique(&mut pathway_ids, "pathway", &pw.id, &pw.span);
        if pw.emphasizes.is_empty() {
            ck.err(
                DiagCode::Empty,
                &pw.span,
                format!("pathway `{}` emphasizes no block", pw.id),
            );
        }
        for b in &pw.emphasizes {
            if !block_ids.contains_key(&b.value.to_string()) {
                ck.err(
                    DiagCode::DanglingRef,
                    &b.span,
                    format!("unknown block `{}`", b.value),
                );
            }
        }
    }

    let competencies: HashSet<&str> = competency_ids.keys().map(String::as_str).collect();
    let mut students = HashMap::new();
    let mut dates: HashMap<(usize, usize), NaiveDate> = HashMap::new();
    for (pi, pf) in draft.portfolios.iter().enumerate() {
        ck.slug("student", &pf.student, &pf.span);
        ck.unique(
            &mut students,
            "portfolio for student",
            &pf.student,
            &pf.span,
        );
        let mut record_ids = HashMap::new();
        for (ri, rec) in pf.records.iter().enumerate() {
            ck.slug("achievement", &rec.id, &rec.span);
            ck.unique(&mut record_ids, "achievement", &rec.id, &rec.span);
            match &rec.revisions {
                None => ck.err(
                    DiagCode::MissingField,
                    &rec.span,
                    format!("achievement `{}` has no `revisions`", rec.id),
                ),
                Some(r) if r.value < 1 || r.value > u32::MAX as i64 => ck.err(
                    DiagCode::Range,
                    &r.span,
                    format!("revision count {} must be at least 1", r.value),
                ),
                _ => {}
            }
            match &rec.created {
                None => ck.err(
                    DiagCode::MissingField,
                    &rec.span,
                    format!("achievement `{}` has no `created` date", rec.id),
                ),
                Some(d) => match NaiveDate::parse_from_str(&d.value, "%Y-%m-%d") {
                    Ok(date) => {
                        dates.insert((pi, ri), date);
                    }
                    Err(_) => ck.err(
                        DiagCode::Range,
                        &d.span,
                        format!("`{}` is not an ISO-8601 date (YYYY-MM-DD)", d.value),
                    ),
                },
            }
            for link in &rec.links {
                match &link.value.target {
                    SpecRef::Competency(id) => {
                        ck.resolve(&competencies, "competency", id, &link.span)
                    }
                    SpecRef::Outcome(r) => {
                        if !outcome_refs.contains(r) {
                            ck.err(
                                DiagCode::DanglingRef,
                                &link.span,
                                format!("unknown outcome `{r}`"),
                            );
                        }
                    }
                }
            }
        }
    }

    let mut meta_keys = HashMap::new();
    for m in &draft.meta {
        ck.unique(&mut meta_keys, "meta key", &m.key, &m.span);
    }

    if ck.diags.iter().any(Diagnostic::is_error) {
        sort_diagnostics(&mut ck.diags);
        return Err(ck.diags);
    }

    let mut doc = build(draft, &dates);
    doc.canonicalize();
    Ok(Model::from_validated(doc))
}

fn build(draft: &Draft, dates: &HashMap<(usize, usize), NaiveDate>) -> ModelDoc {
    let set = |items: &[Spanned<String>]| {
        items
            .iter()
            .map(|s| s.value.clone())
            .collect::<BTreeSet<_>>()
    };

    let catalogs = draft
        .catalogs
        .iter()
        .map(|c| Catalog {
            name: c.name.clone(),
            version: c.version.clone(),
            areas: c
                .areas
                .iter()
                .map(|a| KnowledgeArea {
                    id: a.id.clone(),
                    title: a.title.clone(),
                    category: a.category.clone(),
                    topics: a
                        .topics
                        .iter()
                        .map(|t| Topic {
                            id: t.id.clone(),
                            title: t.title.clone(),
                        })
                        .collect(),
                })
                .collect(),
            skills: c
                .skills
                .iter()
                .map(|s| Skill {
                    id: s.id.clone(),
                    title: s.title.clone(),
                })
                .collect(),
            dispositions: c
                .dispositions
                .iter()
                .map(|d| Disposition {
                    id: d.id.clone(),
                    title: d.title.clone(),
                })
                .collect(),
        })
        .collect();

    let blocks = draft
        .blocks
        .iter()
        .map(|b| CompetencyBlock {
            id: b.id as u32,
            title: b.title.clone(),
            competencies: draft
                .competencies
                .iter()
                .filter(|c| c.block.value == b.id)
                .map(|c| Competency {
                    id: c.id.clone(),
                    block: b.id as u32,
                    statement: c.statement.clone(),
                    topic_reqs: c.reqs.iter().map(|r| r.value.clone()).collect(),
                    skill_reqs: set(&c.skills),
                    disposition_reqs: set(&c.dispositions),
                })
                .collect(),
        })
        .collect();

    let courses = draft
        .courses
        .iter()
        .map(|c| Course {
            id: c.id.clone(),
            title: c.title.clone(),
            year: c.year.as_ref().map_or(1, |y| y.value as u32),
            ects: c.ects.as_ref().map_or(0.0, |e| e.value),
            outcomes: c
                .outcomes
                .iter()
                .map(|o| LearningOutcome {
                    id: o.id.clone(),
                    statement: o.statement.clone(),
                    targets: o.targets.iter().map(|t| t.value.clone()).collect(),
                    skills_exercised: set(&o.skills),
                    dispositions_exercised: set(&o.dispositions),
                })
                .collect(),
            paths: c.paths.iter().map(|p| p.value.clone()).collect(),
        })
        .collect();

    let paths = draft
        .paths
        .iter()
        .map(|p| LearningPath {
            id: p.id.clone(),
            stages: p
                .stages
                .iter()
                .map(|s| s.value.iter().map(|o| o.value.clone()).collect())
                .collect(),
        })
        .collect();

    let objects = draft
        .objects
        .iter()
        .map(|o| LearningObject {
            id: o.id.clone(),
            title: o.title.clone(),
            content_ref: o.content.clone().unwrap_or_default(),
            assessments: o
                .assessments
                .iter()
                .map(|a| Assessment {
                    id: a.id.clone(),
                    kind: a.kind,
                    outcome_refs: a.outcomes.iter().map(|r| r.value.clone()).collect(),
                })
                .collect(),
        })
        .collect();

    let pathways = draft
        .pathways
        .iter()
        .map(|p| Pathway {
            id: p.id.clone(),
            title: p.title.clone(),
            emphasized_blocks: p.emphasizes.iter().map(|b| b.value as u32).collect(),
        })
        .collect();

    let portfolios = draft
        .portfolios
        .iter()
        .enumerate()
        .map(|(pi, p)| StudentPortfolio {
            student: p.student.clone(),
            records: p
                .records
                .iter()
                .enumerate()
                .map(|(ri, r)| AchievementRecord {
                    id: r.id.clone(),
                    student: p.student.clone(),
                    title: r.title.clone(),
                    linked_specs: r.links.iter().map(|l| l.value.clone()).collect(),
                    revisions: r.revisions.as_ref().map_or(1, |v| v.value as u32),
                    created: dates[&(pi, ri)],
                })
                .collect(),
        })
        .collect();

    let meta: BTreeMap<String, String> = draft
        .meta
        .iter()
        .map(|m| (m.key.clone(), m.value.clone()))
        .collect();

    ModelDoc {
        catalogs,
        blocks,
        courses,
        paths,
        objects,
        pathways,
        portfolios,
        meta,
    }
}

/// Validates already-structured data, e.g. a deserialized JSON document.
pub fn validate_doc(doc: &ModelDoc, file: &str) -> Result<Model, Vec<Diagnostic>> {
    validate(&Draft::from_doc(doc, file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    const BASE: &str = r#"
catalog "C" {
  area sw "Software" { topic design "Design" topic test "Testing" }
  skill s1 "S1"
  disposition d1 "D1"
}
block 1 "Block one"
"#;

    fn check(extra: &str) -> Result<Model, Vec<Diagnostic>> {
        let parsed = parse_str(&format!("{BASE}{extra}"), "t.cdsl").expect("parses");
        validate(&parsed.draft)
    }

    fn codes(extra: &str) -> Vec<DiagCode> {
        check(extra)
            .expect_err("invalid")
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn minimal_model_validates() {
        let m = check("competency \"1.1\" in block 1 \"S\" { requires sw/design @ B1 skill s1 }")
            .unwrap();
        assert_eq!(m.competencies().count(), 1);
        assert_eq!(m.topics().count(), 2);
    }

    #[test]
    fn empty_requirements() {
        assert_eq!(
            codes("competency \"1.1\" in block 1 { skill s1 }"),
            vec![DiagCode::EmptyReqs]
        );
    }

    #[test]
    fn dangling_outcome_target_has_span() {
        let errs = check(
            "competency \"1.1\" in block 1 { requires sw/design @ B1 }\n\
             course c1 \"C\" { year 1 outcome o1 \"O\" { targets xx/void @ A1 } }",
        )
        .unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, DiagCode::DanglingRef);
        assert_eq!(errs[0].span, SourceSpan::new("t.cdsl", 9, 49, 9, 61));
    }

    #[test]
    fn duplicate_topic_in_competency() {
        assert_eq!(
            codes(
                "competency \"1.1\" in block 1 { requires sw/design @ B1 requires sw/design @ C1 }"
            ),
            vec![DiagCode::DupTopic]
        );
    }

    #[test]
    fn block_prefix_must_match() {
        assert_eq!(
            codes("competency \"2.1\" in block 1 { requires sw/design @ B1 }"),
            vec![DiagCode::BlockMismatch]
        );
    }

    #[test]
    fn empty_block_and_unknown_block() {
        let c = codes("competency \"3.1\" in block 3 { requires sw/design @ B1 }");
        assert_eq!(c, vec![DiagCode::Empty, DiagCode::DanglingRef]);
    }

    #[test]
    fn course_year_is_required_and_ranged() {
        let ok = "competency \"1.1\" in block 1 { requires sw/design @ B1 }\n";
        assert_eq!(
            codes(&format!("{ok}course c \"C\" {{ }}")),
            vec![DiagCode::MissingField]
        );
        assert_eq!(
            codes(&format!("{ok}course c \"C\" {{ year 6 }}")),
            vec![DiagCode::Range]
        );
        assert_eq!(
            codes(&format!("{ok}course c \"C\" {{ year 1 ects -2 }}")),
            vec![DiagCode::Range]
        );
    }

    #[test]
    fn object_path_and_portfolio_rules() {
        let ok = "competency \"1.1\" in block 1 { requires sw/design @ B1 }\n\
                  course c \"C\" { year 1 outcome o \"O\" { targets sw/test @ A2 } path p }\n";
        assert!(check(&format!(
            "{ok}object lo \"L\" {{ assessment summative a {{ outcome c/o }} }}\npath p {{ stage {{ object lo }} }}"
        ))
        .is_ok());
        assert_eq!(
            codes(&format!(
                "{ok}object lo \"L\" {{ }}\npath p {{ stage {{ object lo }} }}"
            )),
            vec![DiagCode::Empty]
        );
        assert_eq!(
            codes(&format!(
                "{ok}object lo \"L\" {{ assessment formative a {{ outcome c/zz }} }}\npath p {{ stage {{ object lo object lo }} }}"
            )),
            vec![DiagCode::DanglingRef, DiagCode::DupId]
        );
        assert_eq!(
            codes(&format!(
                "{ok}path p {{ stage {{ }} }}\nportfolio s {{ achievement r \"R\" {{ created \"2024-13-01\" revisions 0 competency \"9.9\" @ A1 }} }}"
            )),
            vec![DiagCode::Empty, DiagCode::Range, DiagCode::Range, DiagCode::DanglingRef]
        );
    }

    #[test]
    fn pathway_must_reference_blocks() {
        let ok = "competency \"1.1\" in block 1 { requires sw/design @ B1 }\n";
        assert_eq!(
            codes(&format!("{ok}pathway p \"P\" {{ emphasizes 1 4 }}")),
            vec![DiagCode::DanglingRef]
        );
        assert_eq!(
            codes(&format!("{ok}pathway p \"P\" {{ }}")),
            vec![DiagCode::Empty]
        );
    }

    #[test]
    fn validation_is_idempotent_through_from_doc() {
        let m = check(
            "competency \"1.1\" in block 1 \"S\" { requires sw/test @ A1 requires sw/design @ C2 disposition d1 }\n\
             course c \"C\" { year 2 ects 3.5 outcome o \"O\" { targets sw/test @ A2 skill s1 } }\n\
             pathway p \"P\" { emphasizes 1 }\nmeta \"k\" \"v\"",
        )
        .unwrap();
        let again = validate_doc(&m, "model.json").unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn slug_rules() {
        assert!(is_slug("sw-design"));
        assert!(is_slug("t_01.x"));
        assert!(!is_slug("-x"));
        assert!(!is_slug("a/b"));
        assert!(!is_slug(""));
        assert!(is_competency_id("1.1"));
        assert!(is_competency_id("4.12"));
        assert!(!is_competency_id("1"));
        assert!(!is_competency_id("1..2"));
    }
}
