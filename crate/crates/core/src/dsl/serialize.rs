//! Canonical `.cdsl` rendering of a validated model.

use std::fmt::Write;

use crate::diag::SourceSet;
use crate::model::{Model, SpecRef};

pub const CATALOG_FILE: &str = "catalog.cdsl";
pub const COMPETENCIES_FILE: &str = "competencies.cdsl";
pub const COURSES_FILE: &str = "courses.cdsl";
pub const PATHWAYS_FILE: &str = "pathways.cdsl";
pub const PORTFOLIO_FILE: &str = "portfolio.cdsl";

/// Writes `s` as a double-quoted DSL string literal.
pub fn write_str_literal(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn q(s: &str) -> String {
    let mut out = String::new();
    write_str_literal(&mut out, s);
    out
}

/// Renders `model` in canonical form: one file per top-level kind,
/// declarations in id order, two-space indentation, LF newlines. Files
/// that would be empty are omitted.
pub fn serialize(model: &Model) -> SourceSet {
    let mut set = SourceSet::new();
    let mut push = |name: &str, decls: Vec<String>| {
        if !decls.is_empty() {
            set.insert(name, decls.join("\n"));
        }
    };

    let mut catalog = Vec::new();
    if !model.meta.is_empty() {
        let mut s = String::new();
        for (k, v) in &model.meta {
            writeln!(s, "meta {} {}", q(k), q(v)).unwrap();
        }
        catalog.push(s);
    }
    for cat in &model.catalogs {
        let mut s = String::new();
        write!(s, "catalog {}", q(&cat.name)).unwrap();
        if !cat.version.is_empty() {
            write!(s, " version {}", q(&cat.version)).unwrap();
        }
        s.push_str(" {\n");
        for area in &cat.areas {
            write!(s, "  area {} {}", area.id, q(&area.title)).unwrap();
            if let Some(category) = &area.category {
                write!(s, " category {}", q(category)).unwrap();
            }
            s.push_str(" {\n");
            for topic in &area.topics {
                let slug = topic
                    .id
                    .strip_prefix(&format!("{}/", area.id))
                    .unwrap_or(&topic.id);
                writeln!(s, "    topic {} {}", slug, q(&topic.title)).unwrap();
            }
            s.push_str("  }\n");
        }
        for skill in &cat.skills {
            writeln!(s, "  skill {} {}", skill.id, q(&skill.title)).unwrap();
        }
        for disp in &cat.dispositions {
            writeln!(s, "  disposition {} {}", disp.id, q(&disp.title)).unwrap();
        }
        s.push_str("}\n");
        catalog.push(s);
    }
    push(CATALOG_FILE, catalog);

    let mut competencies = Vec::new();
    if !model.blocks.is_empty() {
        let mut s = String::new();
        for block in &model.blocks {
            writeln!(s, "block {} {}", block.id, q(&block.title)).unwrap();
        }
        competencies.push(s);
    }
    for comp in model.competencies() {
        let mut s = String::new();
        writeln!(
            s,
            "competency {} in block {} {} {{",
            q(&comp.id),
            comp.block,
            q(&comp.statement)
        )
        .unwrap();
        for req in &comp.topic_reqs {
            writeln!(s, "  requires {} @ {}", req.topic, req.level).unwrap();
        }
        for skill in &comp.skill_reqs {
            writeln!(s, "  skill {skill}").unwrap();
        }
        for disp in &comp.disposition_reqs {
            writeln!(s, "  disposition {disp}").unwrap();
        }
        s.push_str("}\n");
        competencies.push(s);
    }
    push(COMPETENCIES_FILE, competencies);

    let mut courses = Vec::new();
    for course in &model.courses {
        let mut s = String::new();
        writeln!(s, "course {} {} {{", course.id, q(&course.title)).unwrap();
        writeln!(s, "  year {}", course.year).unwrap();
        writeln!(s, "  ects {}", course.ects).unwrap();
        for outcome in &course.outcomes {
            writeln!(s, "  outcome {} {} {{", outcome.id, q(&outcome.statement)).unwrap();
            for t in &outcome.targets {
                writeln!(s, "    targets {} @ {}", t.topic, t.level).unwrap();
            }
            for skill in &outcome.skills_exercised {
                writeln!(s, "    skill {skill}").unwrap();
            }
            for disp in &outcome.dispositions_exercised {
                writeln!(s, "    disposition {disp}").unwrap();
            }
            s.push_str("  }\n");
        }
        for path in &course.paths {
            writeln!(s, "  path {path}").unwrap();
        }
        s.push_str("}\n");
        courses.push(s);
    }
    for path in &model.paths {
        let mut s = String::new();
        writeln!(s, "path {} {{", path.id).unwrap();
        for stage in &path.stages {
            s.push_str("  stage {\n");
            for obj in stage {
                writeln!(s, "    object {obj}").unwrap();
            }
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        courses.push(s);
    }
    for obj in &model.objects {
        let mut s = String::new();
        writeln!(s, "object {} {} {{", obj.id, q(&obj.title)).unwrap();
        writeln!(s, "  content {}", q(&obj.content_ref)).unwrap();
        for a in &obj.assessments {
            writeln!(s, "  assessment {} {} {{", a.kind.as_str(), a.id).unwrap();
            for r in &a.outcome_refs {
                writeln!(s, "    outcome {r}").unwrap();
            }
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        courses.push(s);
    }
    push(COURSES_FILE, courses);

    let pathways = model
        .pathways
        .iter()
        .map(|p| {
            let blocks: Vec<String> = p.emphasized_blocks.iter().map(u32::to_string).collect();
            format!(
                "pathway {} {} {{\n  emphasizes {}\n}}\n",
                p.id,
                q(&p.title),
                blocks.join(" ")
            )
        })
        .collect();
    push(PATHWAYS_FILE, pathways);

    let mut portfolios = Vec::new();
    for pf in &model.portfolios {
        let mut s = String::new();
        writeln!(s, "portfolio {} {{", pf.student).unwrap();
        for r in &pf.records {
            writeln!(s, "  achievement {} {} {{", r.id, q(&r.title)).unwrap();
            writeln!(s, "    created \"{}\"", r.created.format("%Y-%m-%d")).unwrap();
            writeln!(s, "    revisions {}", r.revisions).unwrap();
            for link in &r.linked_specs {
                match &link.target {
                    SpecRef::Competency(id) => {
                        writeln!(s, "    competency {} @ {}", q(id), link.level).unwrap()
                    }
                    SpecRef::Outcome(o) => writeln!(s, "    outcome {o} @ {}", link.level).unwrap(),
                }
            }
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        portfolios.push(s);
    }
    push(PORTFOLIO_FILE, portfolios);

    set
}
