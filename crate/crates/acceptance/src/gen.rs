//! Seeded random models and what-if deltas.

use std::collections::{BTreeMap, BTreeSet};

use cforge_core::model::{
    AchievementRecord, Assessment, AssessmentKind, Catalog, Competency, CompetencyBlock, Course,
    Disposition, KnowledgeArea, LearningObject, LearningOutcome, LearningPath, LinkedSpec,
    OutcomeRef, Pathway, Skill, SpecRef, StudentPortfolio, Topic, TopicRequirement,
};
use cforge_core::validate::validate_doc;
use cforge_core::whatif::{OutcomeCreation, TargetEdit, WhatIfDelta};
use cforge_core::{BloomLevel, Model, ModelDoc};
use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const LEVELS: [BloomLevel; 6] = [
    BloomLevel::A1,
    BloomLevel::A2,
    BloomLevel::B1,
    BloomLevel::B2,
    BloomLevel::C1,
    BloomLevel::C2,
];

/// Upper bounds on generated model size.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub competencies: usize,
    pub outcomes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            competencies: 10,
            outcomes: 50,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn level(rng: &mut impl Rng) -> BloomLevel {
    *LEVELS.choose(rng).unwrap()
}

/// Titles that exercise string escaping now and then.
fn title(rng: &mut impl Rng, base: &str) -> String {
    match rng.gen_range(0..8) {
        0 => format!("{base} \"quoted\""),
        1 => format!("{base} with a \\ backslash"),
        2 => format!("{base}: données é ü"),
        3 => format!("{base}\tand a tab"),
        _ => base.to_string(),
    }
}

fn subset<T: Clone>(rng: &mut impl Rng, items: &[T], max: usize) -> Vec<T> {
    let n = rng.gen_range(0..=max.min(items.len()));
    items.choose_multiple(rng, n).cloned().collect()
}

/// A random valid model. Panics if the generator produced something
/// `validate` rejects, since that is a bug in one of the two.
pub fn model(seed: u64, limits: Limits) -> Model {
    let doc = doc(&mut rng(seed), limits);
    match validate_doc(&doc, "<generated>") {
        Ok(m) => m,
        Err(d) => panic!("seed {seed}: generated model is invalid: {d:?}\n{doc:#?}"),
    }
}

pub fn doc(rng: &mut impl Rng, limits: Limits) -> ModelDoc {
    let mut areas = Vec::new();
    let mut topics = Vec::new();
    for a in 0..rng.gen_range(1..=3) {
        let id = format!("area{a}");
        let mut ts = Vec::new();
        for t in 0..rng.gen_range(1..=6) {
            ts.push(Topic {
                id: format!("{id}/t{t}"),
                title: title(rng, &format!("Topic {t}")),
            });
            topics.push(format!("{id}/t{t}"));
        }
        let category = rng.gen_bool(0.5).then(|| "Category".to_string());
        areas.push(KnowledgeArea {
            id,
            title: title(rng, "Area"),
            category,
            topics: ts,
        });
    }
    let skills: Vec<String> = (0..rng.gen_range(0..=4))
        .map(|i| format!("skill{i}"))
        .collect();
    let dispositions: Vec<String> = (0..rng.gen_range(0..=3))
        .map(|i| format!("disp{i}"))
        .collect();
    let catalog = Catalog {
        name: title(rng, "Catalog"),
        version: "1".into(),
        areas,
        skills: skills
            .iter()
            .map(|s| Skill {
                id: s.clone(),
                title: title(rng, "Skill"),
            })
            .collect(),
        dispositions: dispositions
            .iter()
            .map(|d| Disposition {
                id: d.clone(),
                title: title(rng, "Disposition"),
            })
            .collect(),
    };

    let n_blocks = rng.gen_range(1..=3usize);
    let n_comps = rng.gen_range(n_blocks..=limits.competencies.max(n_blocks));
    let mut blocks: Vec<CompetencyBlock> = (1..=n_blocks as u32)
        .map(|b| CompetencyBlock {
            id: b,
            title: title(rng, &format!("Block {b}")),
            competencies: Vec::new(),
        })
        .collect();
    for i in 0..n_comps {
        let b = if i < n_blocks {
            i
        } else {
            rng.gen_range(0..n_blocks)
        };
        let block = &mut blocks[b];
        let id = format!("{}.{}", block.id, block.competencies.len() + 1);
        let reqs = subset(rng, &topics, 4);
        let topic_reqs: Vec<TopicRequirement> = if reqs.is_empty() {
            vec![topics[0].clone()]
        } else {
            reqs
        }
        .into_iter()
        .map(|t| TopicRequirement::new(t, level(rng)))
        .collect();
        block.competencies.push(Competency {
            id,
            block: block.id,
            statement: title(rng, "Statement"),
            topic_reqs,
            skill_reqs: subset(rng, &skills, 2).into_iter().collect(),
            disposition_reqs: subset(rng, &dispositions, 2).into_iter().collect(),
        });
    }

    let n_courses = rng.gen_range(1..=5usize);
    let mut budget = rng.gen_range(n_courses..=limits.outcomes.max(n_courses));
    let mut courses = Vec::new();
    for k in 0..n_courses {
        let left = n_courses - k - 1;
        let n = if left == 0 {
            budget
        } else {
            rng.gen_range(1..=(budget - left).min(12))
        };
        budget -= n;
        let id = format!("course{k}");
        let outcomes = (0..n)
            .map(|o| {
                let mut targets: Vec<String> = subset(rng, &topics, 4);
                if targets.is_empty() {
                    targets.push(topics.choose(rng).unwrap().clone());
                }
                LearningOutcome {
                    id: format!("lo{o}"),
                    statement: title(rng, "Outcome"),
                    targets: targets
                        .into_iter()
                        .map(|t| TopicRequirement::new(t, level(rng)))
                        .collect(),
                    skills_exercised: subset(rng, &skills, 2).into_iter().collect(),
                    dispositions_exercised: subset(rng, &dispositions, 1).into_iter().collect(),
                }
            })
            .collect();
        courses.push(Course {
            id,
            title: title(rng, "Course"),
            year: rng.gen_range(1..=5),
            ects: f64::from(rng.gen_range(0..=40u32)) / 2.0,
            outcomes,
            paths: Vec::new(),
        });
    }
    let outcome_refs: Vec<OutcomeRef> = courses
        .iter()
        .flat_map(|c| c.outcomes.iter().map(|o| OutcomeRef::new(&c.id, &o.id)))
        .collect();

    let mut objects = Vec::new();
    let mut paths = Vec::new();
    if rng.gen_bool(0.5) {
        for i in 0..rng.gen_range(1..=3) {
            let kinds = [
                AssessmentKind::Diagnostic,
                AssessmentKind::Formative,
                AssessmentKind::Summative,
            ];
            let n = rng.gen_range(1..=2);
            let refs: BTreeSet<OutcomeRef> =
                outcome_refs.choose_multiple(rng, n).cloned().collect();
            objects.push(LearningObject {
                id: format!("obj{i}"),
                title: title(rng, "Object"),
                content_ref: format!("https://example.org/obj{i}"),
                assessments: vec![Assessment {
                    id: format!("obj{i}-a"),
                    kind: *kinds.choose(rng).unwrap(),
                    outcome_refs: refs,
                }],
            });
        }
        let ids: Vec<String> = objects.iter().map(|o| o.id.clone()).collect();
        let mut stage = ids.clone();
        stage.shuffle(rng);
        paths.push(LearningPath {
            id: "path0".into(),
            stages: vec![stage],
        });
        let owner = courses.choose_mut(rng).unwrap();
        owner.paths.push("path0".into());
    }

    let mut pathways = Vec::new();
    for p in 0..rng.gen_range(0..=2) {
        let ids: Vec<u32> = blocks.iter().map(|b| b.id).collect();
        let mut emph: BTreeSet<u32> = subset(rng, &ids, ids.len()).into_iter().collect();
        if emph.is_empty() {
            emph.insert(ids[0]);
        }
        pathways.push(Pathway {
            id: format!("pathway{p}"),
            title: title(rng, "Pathway"),
            emphasized_blocks: emph,
        });
    }

    let comp_ids: Vec<String> = blocks
        .iter()
        .flat_map(|b| b.competencies.iter().map(|c| c.id.clone()))
        .collect();
    let mut portfolios = Vec::new();
    for s in 0..rng.gen_range(0..=3) {
        let student = format!("student{s}");
        let records = (0..rng.gen_range(0..=4))
            .map(|r| AchievementRecord {
                id: format!("{student}-r{r}"),
                student: student.clone(),
                title: title(rng, "Record"),
                linked_specs: (0..rng.gen_range(0..=3))
                    .map(|_| LinkedSpec {
                        target: if rng.gen_bool(0.5) {
                            SpecRef::Competency(comp_ids.choose(rng).unwrap().clone())
                        } else {
                            SpecRef::Outcome(outcome_refs.choose(rng).unwrap().clone())
                        },
                        level: level(rng),
                    })
                    .collect(),
                revisions: rng.gen_range(1..=9),
                created: NaiveDate::from_ymd_opt(
                    2024,
                    rng.gen_range(1..=12),
                    rng.gen_range(1..=28),
                )
                .unwrap(),
            })
            .collect();
        portfolios.push(StudentPortfolio { student, records });
    }

    let mut meta = BTreeMap::new();
    if rng.gen_bool(0.3) {
        meta.insert("program".to_string(), title(rng, "Generated"));
    }

    ModelDoc {
        catalogs: vec![catalog],
        blocks,
        courses,
        paths,
        objects,
        pathways,
        portfolios,
        meta,
    }
}

/// A random delta against `model`. Most are resolvable; roughly one in
/// eight carries a deliberately bad edit.
pub fn delta(rng: &mut impl Rng, model: &Model) -> WhatIfDelta {
    let topics: Vec<String> = model.topics().map(|t| t.id.clone()).collect();
    let courses: Vec<String> = model.courses.iter().map(|c| c.id.clone()).collect();
    let mut outcomes: Vec<OutcomeRef> = model
        .courses
        .iter()
        .flat_map(|c| c.outcomes.iter().map(|o| OutcomeRef::new(&c.id, &o.id)))
        .collect();
    let mut d = WhatIfDelta::default();

    for i in 0..rng.gen_range(0..=2) {
        let course = courses.choose(rng).unwrap().clone();
        let outcome = format!("new{i}");
        d.create.push(OutcomeCreation {
            course: course.clone(),
            outcome: outcome.clone(),
            statement: "New".into(),
            span: None,
        });
        let t = topics.choose(rng).unwrap();
        d.add
            .push(TargetEdit::new(&course, &outcome, t, level(rng)));
        outcomes.push(OutcomeRef::new(course, outcome));
    }
    for _ in 0..rng.gen_range(0..=4) {
        let r = outcomes.choose(rng).unwrap();
        d.add.push(TargetEdit::new(
            &r.course,
            &r.outcome,
            topics.choose(rng).unwrap(),
            level(rng),
        ));
    }
    let existing: Vec<(OutcomeRef, &TopicRequirement)> = model
        .courses
        .iter()
        .flat_map(|c| {
            c.outcomes.iter().flat_map(move |o| {
                o.targets
                    .iter()
                    .map(move |t| (OutcomeRef::new(&c.id, &o.id), t))
            })
        })
        .collect();
    let mut removed = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=3) {
        let (r, t) = existing.choose(rng).unwrap();
        if removed.insert((r.clone(), t.topic.clone())) {
            d.remove
                .push(TargetEdit::new(&r.course, &r.outcome, &t.topic, t.level));
        }
    }

    if rng.gen_range(0..8) == 0 {
        match rng.gen_range(0..4) {
            0 => d.add.push(TargetEdit::new(
                &courses[0],
                "no-such-outcome",
                &topics[0],
                BloomLevel::A1,
            )),
            1 => d.add.push(TargetEdit::new(
                &outcomes[0].course,
                &outcomes[0].outcome,
                "nowhere/t0",
                BloomLevel::A1,
            )),
            2 => d.create.push(OutcomeCreation {
                course: outcomes[0].course.clone(),
                outcome: outcomes[0].outcome.clone(),
                statement: String::new(),
                span: None,
            }),
            _ => {
                let (r, t) = existing.choose(rng).unwrap();
                let other = LEVELS.iter().copied().find(|l| *l != t.level).unwrap();
                d.remove
                    .push(TargetEdit::new(&r.course, &r.outcome, &t.topic, other));
            }
        }
    }
    d
}
