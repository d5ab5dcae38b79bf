//! Invariants over randomly generated models.

use cforge_acceptance::gen::{self, Limits, LEVELS};
use cforge_core::coverage::{Analyzer, CoverageOptions, Requirement};
use cforge_core::diag::SourceSet;
use cforge_core::dsl;
use cforge_core::io::{from_json, to_json};
use cforge_core::portfolio::cohort_stats;
use cforge_core::validate::{validate, validate_doc};
use cforge_core::whatif::{whatif, TargetEdit, WhatIfDelta};
use cforge_core::{Graph, Model};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn small() -> Limits {
    Limits {
        competencies: 6,
        outcomes: 20,
    }
}

fn any_model() -> impl Strategy<Value = Model> {
    any::<u64>().prop_map(|seed| gen::model(seed, small()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_a_target_never_lowers_coverage(m in any_model(), pick in any::<u64>(), lvl in 0usize..6) {
        let graph = Graph::build(&m);
        let outcomes: Vec<(&str, &str)> =
            m.courses.iter().flat_map(|c| c.outcomes.iter().map(move |o| (c.id.as_str(), o.id.as_str()))).collect();
        let topics: Vec<&str> = m.topics().map(|t| t.id.as_str()).collect();
        let (course, outcome) = outcomes[pick as usize % outcomes.len()];
        let topic = topics[(pick >> 16) as usize % topics.len()];
        let delta = WhatIfDelta { add: vec![TargetEdit::new(course, outcome, topic, LEVELS[lvl])], ..Default::default() };
        let r = whatif(&graph, &delta).unwrap();
        prop_assert!(r.after.gap_count() <= r.before.gap_count());
        for c in &r.changed {
            prop_assert!(c.after > c.before);
        }
    }

    #[test]
    fn removing_a_target_never_raises_coverage(m in any_model(), pick in any::<u64>()) {
        let graph = Graph::build(&m);
        let targets: Vec<TargetEdit> = m
            .courses
            .iter()
            .flat_map(|c| c.outcomes.iter().filter(|o| o.targets.len() > 1).flat_map(move |o| {
                o.targets.iter().map(move |t| TargetEdit::new(&c.id, &o.id, &t.topic, t.level))
            }))
            .collect();
        prop_assume!(!targets.is_empty());
        let delta = WhatIfDelta { remove: vec![targets[pick as usize % targets.len()].clone()], ..Default::default() };
        let r = whatif(&graph, &delta).unwrap();
        prop_assert!(r.after.gap_count() >= r.before.gap_count());
        for c in &r.changed {
            prop_assert!(c.after < c.before);
        }
    }

    #[test]
    fn raising_a_requirement_never_raises_coverage(m in any_model(), pick in any::<u64>()) {
        let mut doc = m.doc().clone();
        let comps: Vec<(usize, usize)> = doc
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(b, blk)| (0..blk.competencies.len()).map(move |c| (b, c)))
            .collect();
        let (b, c) = comps[pick as usize % comps.len()];
        let comp = &mut doc.blocks[b].competencies[c];
        let id = comp.id.clone();
        let i = (pick >> 8) as usize % comp.topic_reqs.len();
        comp.topic_reqs[i].level = LEVELS[5];
        let raised = validate_doc(&doc, "raised").unwrap();
        let before = Analyzer::new(&Graph::build(&m)).competency_coverage(&id).unwrap();
        let after = Analyzer::new(&Graph::build(&raised)).competency_coverage(&id).unwrap();
        prop_assert!(after.topic_fraction <= before.topic_fraction);
    }

    #[test]
    fn matrix_agrees_with_reports(m in any_model()) {
        let graph = Graph::build(&m);
        let an = Analyzer::new(&graph);
        let matrix = an.coverage_matrix();
        let reports = an.all_reports();
        prop_assert_eq!(matrix.competencies.len(), reports.len());
        for (row, r) in matrix.cells.iter().zip(&reports) {
            let satisfied = r.satisfied_topics() as u32;
            prop_assert!(row.iter().all(|&n| n <= satisfied));
            prop_assert_eq!(row.iter().any(|&n| n > 0), satisfied > 0);
            prop_assert_eq!(r.topic_fraction.numer() == 0, satisfied == 0);
        }
    }

    #[test]
    fn gap_report_lists_exactly_the_unsatisfied(m in any_model(), strict in any::<bool>()) {
        let graph = Graph::build(&m);
        let an = Analyzer::new(&graph).options(CoverageOptions { strict_fpk: strict });
        let gaps = an.gap_report();
        let reports = an.all_reports();
        let unsatisfied: usize = reports.iter().map(|r| r.statuses.iter().filter(|s| !s.satisfied).count()).sum();
        prop_assert_eq!(gaps.gap_count(), unsatisfied);
        let listed: Vec<&str> = gaps.competencies.iter().map(|c| c.competency.as_str()).collect();
        let expected: Vec<&str> = reports
            .iter()
            .filter(|r| r.statuses.iter().any(|s| !s.satisfied))
            .map(|r| r.competency.as_str())
            .collect();
        prop_assert_eq!(listed, expected);
        for t in &gaps.untaught_topics {
            prop_assert!(!gaps.orphan_topics.contains(t));
        }
    }

    #[test]
    fn strict_credit_is_never_more_generous(m in any_model()) {
        let graph = Graph::build(&m);
        let loose = Analyzer::new(&graph).all_reports();
        let strict = Analyzer::new(&graph).options(CoverageOptions { strict_fpk: true }).all_reports();
        for (l, s) in loose.iter().zip(&strict) {
            prop_assert_eq!(l.topic_fraction, s.topic_fraction);
            prop_assert!(l.skills_ok || !s.skills_ok);
            prop_assert!(l.dispositions_ok || !s.dispositions_ok);
        }
    }

    #[test]
    fn trace_directions_agree(m in any_model()) {
        let graph = Graph::build(&m);
        for t in m.topics() {
            for hit in graph.trace_forward(&t.id).unwrap() {
                let back = graph.trace_backward(&hit.competency).unwrap();
                prop_assert!(back.topics.iter().any(|r| r.topic == t.id && r.level == hit.level));
            }
        }
        for c in m.competencies() {
            for r in graph.trace_backward(&c.id).unwrap().topics {
                prop_assert!(graph.trace_forward(&r.topic).unwrap().iter().any(|h| h.competency == c.id));
            }
        }
    }

    #[test]
    fn dsl_and_json_round_trip(m in any_model()) {
        let files = dsl::serialize(&m);
        let back = validate(&dsl::parse(&files).unwrap().draft).unwrap();
        prop_assert_eq!(&back, &m);
        let json = from_json(&to_json(&m), "m.json").unwrap();
        prop_assert_eq!(&json, &m);
    }

    #[test]
    fn file_split_does_not_matter(m in any_model(), seed in any::<u64>()) {
        // Concatenating every file into one source gives the same model.
        let files = dsl::serialize(&m);
        let mut texts: Vec<&str> = files.iter().map(|(_, t)| t).collect();
        texts.shuffle(&mut gen::rng(seed));
        let one = SourceSet::new().with("all.cdsl", texts.join("\n"));
        let back = validate(&dsl::parse(&one).unwrap().draft).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn cohort_stats_ignore_order(m in any_model(), seed in any::<u64>()) {
        let mut shuffled = m.portfolios.clone();
        let mut rng = gen::rng(seed);
        shuffled.shuffle(&mut rng);
        for p in &mut shuffled {
            p.records.shuffle(&mut rng);
        }
        prop_assert_eq!(cohort_stats(&shuffled), cohort_stats(&m.portfolios));
    }

    #[test]
    fn requirements_keep_their_declared_order(m in any_model()) {
        let graph = Graph::build(&m);
        for c in m.competencies() {
            let report = Analyzer::new(&graph).competency_coverage(&c.id).unwrap();
            let topics: Vec<&str> = report
                .statuses
                .iter()
                .filter_map(|s| match &s.requirement {
                    Requirement::Topic { topic, .. } => Some(topic.as_str()),
                    _ => None,
                })
                .collect();
            let declared: Vec<&str> = c.topic_reqs.iter().map(|r| r.topic.as_str()).collect();
            prop_assert_eq!(topics, declared);
        }
    }
}
