//! Checks against the shipped ISANUM fixture.

use std::collections::BTreeSet;
use std::path::PathBuf;

use cforge_core::coverage::{Analyzer, Requirement};
use cforge_core::graph::NodeKind;
use cforge_core::io::{self, export, from_json, to_json, ExportFormat};
use cforge_core::model::{Course, LearningOutcome, TopicRequirement};
use cforge_core::validate::validate_doc;
use cforge_core::{bloom_geq, BloomLevel, Graph, Model};

fn fixture() -> Model {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/isanum");
    io::load(&dir).expect("fixture loads").model
}

#[test]
fn node_count_is_the_sum_of_the_model_parts() {
    let m = fixture();
    let g = Graph::build(&m);
    let outcomes: usize = m.courses.iter().map(|c| c.outcomes.len()).sum();
    let expected = 5
        + 23
        + 34
        + 494
        + 13
        + 11
        + m.courses.len()
        + outcomes
        + m.paths.len()
        + m.objects.len()
        + m.pathways.len();
    assert_eq!(g.node_count(), expected);
    assert_eq!(g.count_nodes(NodeKind::Topic), 494);
    assert_eq!(g.count_nodes(NodeKind::Area), 34);
}

#[test]
fn software_design_topic_traces_to_competency_1_1() {
    let g = Graph::build(&fixture());
    let hits = g.trace_forward("sw-design/arch-patterns").unwrap();
    assert!(hits
        .iter()
        .any(|h| h.competency == "1.1" && h.level == BloomLevel::B2));

    let back = g.trace_backward("1.1").unwrap();
    assert!(back.topics.contains(&TopicRequirement::new(
        "sw-design/arch-patterns",
        BloomLevel::B2
    )));
    assert!(back.courses.contains("se-101"));
    assert!(back
        .outcomes
        .iter()
        .any(|r| r.course == "se-101" && r.outcome == "design-basics"));
}

#[test]
fn every_matrix_row_has_a_nonzero_cell() {
    let g = Graph::build(&fixture());
    let matrix = Analyzer::new(&g).coverage_matrix();
    assert_eq!(matrix.cells.len(), 23);
    for (c, row) in matrix.competencies.iter().zip(&matrix.cells) {
        assert!(row.iter().any(|&n| n > 0), "{c}");
    }
}

#[test]
fn saturated_variant_has_no_gaps() {
    let m = fixture();
    let mut doc = m.doc().clone();
    let required: BTreeSet<String> = m
        .competencies()
        .flat_map(|c| c.topic_reqs.iter().map(|r| r.topic.clone()))
        .collect();
    doc.courses.push(Course {
        id: "saturate".into(),
        title: "Everything at C2".into(),
        year: 5,
        ects: 0.0,
        outcomes: vec![LearningOutcome {
            id: "all".into(),
            statement: "All".into(),
            targets: required
                .iter()
                .map(|t| TopicRequirement::new(t, BloomLevel::C2))
                .collect(),
            skills_exercised: m.skills().map(|s| s.id.clone()).collect(),
            dispositions_exercised: m.dispositions().map(|d| d.id.clone()).collect(),
        }],
        paths: Vec::new(),
    });
    let saturated = validate_doc(&doc, "saturated").unwrap();
    let gaps = Analyzer::new(&Graph::build(&saturated)).gap_report();
    assert!(gaps.competencies.is_empty(), "{gaps:?}");
    assert_eq!(gaps.gap_count(), 0);
    assert!(gaps.untaught_topics.is_empty());
}

fn topic_gaps(m: &Model) -> BTreeSet<(String, String)> {
    Analyzer::new(&Graph::build(m))
        .gap_report()
        .competencies
        .into_iter()
        .flat_map(|c| {
            let id = c.competency;
            c.gaps.into_iter().filter_map(move |g| match g.requirement {
                Requirement::Topic { topic, .. } => Some((id.clone(), topic)),
                _ => None,
            })
        })
        .collect()
}

#[test]
fn removing_a_course_exposes_exactly_what_only_it_satisfied() {
    let m = fixture();
    let before = topic_gaps(&m);
    for course in &m.courses {
        // Requirements met by this course and by no other.
        let mut sole = BTreeSet::new();
        for c in m.competencies() {
            for r in &c.topic_reqs {
                let meets = |k: &Course| {
                    k.outcomes.iter().any(|o| {
                        o.targets
                            .iter()
                            .any(|t| t.topic == r.topic && bloom_geq(t.level, r.level))
                    })
                };
                if meets(course) && !m.courses.iter().any(|k| k.id != course.id && meets(k)) {
                    sole.insert((c.id.clone(), r.topic.clone()));
                }
            }
        }

        let mut doc = m.doc().clone();
        doc.courses.retain(|k| k.id != course.id);
        doc.portfolios.clear();
        doc.objects.clear();
        doc.paths.clear();
        for k in &mut doc.courses {
            k.paths.clear();
        }
        let without = validate_doc(&doc, "without").unwrap();
        let after = topic_gaps(&without);
        let exposed: BTreeSet<_> = after.difference(&before).cloned().collect();
        assert!(before.is_subset(&after), "{}", course.id);
        assert_eq!(exposed, sole, "{}", course.id);
    }
}

#[test]
fn json_and_directory_loads_agree() {
    let m = fixture();
    assert_eq!(from_json(&to_json(&m), "model.json").unwrap(), m);
}

#[test]
fn wiki_has_a_page_per_competency() {
    let m = fixture();
    let set = export(&m, ExportFormat::Wiki);
    let pages: Vec<&str> = set
        .names()
        .filter(|n| n.starts_with("Competency_"))
        .collect();
    assert_eq!(pages.len(), 23);
    for c in m.competencies() {
        let page = set.get(&format!("Competency_{}.wiki", c.id)).unwrap();
        assert!(
            page.contains(&format!("[[In block::{}]]", c.block)),
            "{}",
            c.id
        );
        for r in &c.topic_reqs {
            assert!(
                page.contains(&format!(
                    "[[Requires topic::{}]] {{{{Bloom level|{}}}}}",
                    r.topic, r.level
                )),
                "{}",
                c.id
            );
        }
        for s in &c.skill_reqs {
            assert!(
                page.contains(&format!("[[Requires skill::{s}]]")),
                "{}",
                c.id
            );
        }
        for d in &c.disposition_reqs {
            assert!(
                page.contains(&format!("[[Requires disposition::{d}]]")),
                "{}",
                c.id
            );
        }
    }
}
