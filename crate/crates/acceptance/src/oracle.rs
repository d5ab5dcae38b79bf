//! Brute-force recomputation of coverage, matrices, gap reports, pathway
//! profiles and delta application. Everything is derived from the model
//! data by nested loops; nothing here touches the graph or its indexes.

use std::collections::BTreeSet;

use cforge_core::coverage::{
    CompetencyGaps, CoverageMatrix, CoverageReport, Fraction, Gap, GapReason, GapReport, Offer,
    Requirement, RequirementStatus,
};
use cforge_core::model::{Competency, LearningOutcome, TopicRequirement};
use cforge_core::whatif::WhatIfDelta;
use cforge_core::{BloomLevel, ModelDoc};

const ORDER: [&str; 6] = ["A1", "A2", "B1", "B2", "C1", "C2"];

/// Position in the Bloom sequence, looked up by code.
pub fn rank(level: BloomLevel) -> usize {
    ORDER
        .iter()
        .position(|c| *c == level.code())
        .expect("known level")
}

pub fn at_least(offered: BloomLevel, required: BloomLevel) -> bool {
    rank(offered) >= rank(required)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact rational as a reduced (numerator, denominator) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Q(pub u128, pub u128);

impl Q {
    pub fn new(n: u128, d: u128) -> Q {
        if n == 0 {
            return Q(0, 1);
        }
        let g = gcd(n, d);
        Q(n / g, d / g)
    }

    pub fn less_than(self, other: Q) -> bool {
        self.0 * other.1 < other.0 * self.1
    }

    /// Arithmetic mean; zero for an empty list.
    pub fn mean(items: &[Q]) -> Q {
        if items.is_empty() {
            return Q(0, 1);
        }
        let mut acc = Q(0, 1);
        for q in items {
            acc = Q::new(acc.0 * q.1 + q.0 * acc.1, acc.1 * q.1);
        }
        Q::new(acc.0, acc.1 * items.len() as u128)
    }

    pub fn matches(self, f: Fraction) -> bool {
        self == Q(u128::from(f.numer()), u128::from(f.denom()))
    }
}

fn competencies(doc: &ModelDoc) -> Vec<&Competency> {
    let mut out: Vec<&Competency> = doc
        .blocks
        .iter()
        .flat_map(|b| b.competencies.iter())
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn all_outcomes(doc: &ModelDoc) -> Vec<(&str, &LearningOutcome)> {
    doc.courses
        .iter()
        .flat_map(|c| c.outcomes.iter().map(move |o| (c.id.as_str(), o)))
        .collect()
}

fn better(a: &Offer, b: &Offer) -> bool {
    let (ra, rb) = (rank(a.level), rank(b.level));
    ra > rb
        || (ra == rb && (a.course < b.course || (a.course == b.course && a.outcome < b.outcome)))
}

fn best_offer(doc: &ModelDoc, topic: &str) -> Option<Offer> {
    let mut best: Option<Offer> = None;
    for (course, o) in all_outcomes(doc) {
        for t in &o.targets {
            if t.topic != topic {
                continue;
            }
            let offer = Offer {
                course: course.to_string(),
                outcome: o.id.clone(),
                level: t.level,
            };
            if best.as_ref().is_none_or(|b| better(&offer, b)) {
                best = Some(offer);
            }
        }
    }
    best
}

fn course_targets(doc: &ModelDoc, course: &str, reqs: &[TopicRequirement]) -> bool {
    all_outcomes(doc).into_iter().any(|(c, o)| {
        c == course
            && o.targets
                .iter()
                .any(|t| reqs.iter().any(|r| r.topic == t.topic))
    })
}

fn exercised(
    doc: &ModelDoc,
    comp: &Competency,
    strict: bool,
    pick: impl Fn(&LearningOutcome) -> bool,
) -> bool {
    all_outcomes(doc)
        .into_iter()
        .any(|(course, o)| pick(o) && (!strict || course_targets(doc, course, &comp.topic_reqs)))
}

pub fn report(doc: &ModelDoc, comp: &Competency, strict: bool) -> CoverageReport {
    let mut statuses = Vec::new();
    let mut hits = 0u64;
    for req in &comp.topic_reqs {
        let best = best_offer(doc, &req.topic);
        let ok = matches!(&best, Some(b) if at_least(b.level, req.level));
        hits += u64::from(ok);
        statuses.push(RequirementStatus {
            requirement: Requirement::Topic {
                topic: req.topic.clone(),
                level: req.level,
            },
            satisfied: ok,
            best_offer: best,
        });
    }
    let mut skills_ok = true;
    for s in &comp.skill_reqs {
        let ok = exercised(doc, comp, strict, |o| o.skills_exercised.contains(s));
        skills_ok = skills_ok && ok;
        statuses.push(RequirementStatus {
            requirement: Requirement::Skill { id: s.clone() },
            satisfied: ok,
            best_offer: None,
        });
    }
    let mut dispositions_ok = true;
    for d in &comp.disposition_reqs {
        let ok = exercised(doc, comp, strict, |o| o.dispositions_exercised.contains(d));
        dispositions_ok = dispositions_ok && ok;
        statuses.push(RequirementStatus {
            requirement: Requirement::Disposition { id: d.clone() },
            satisfied: ok,
            best_offer: None,
        });
    }
    CoverageReport {
        competency: comp.id.clone(),
        statuses,
        topic_fraction: Fraction::new(hits, comp.topic_reqs.len() as u64),
        skills_ok,
        dispositions_ok,
    }
}

pub fn reports(doc: &ModelDoc, strict: bool) -> Vec<CoverageReport> {
    competencies(doc)
        .into_iter()
        .map(|c| report(doc, c, strict))
        .collect()
}

pub fn matrix(doc: &ModelDoc) -> CoverageMatrix {
    let comps = competencies(doc);
    let mut courses: Vec<String> = doc.courses.iter().map(|c| c.id.clone()).collect();
    courses.sort();
    let mut cells = Vec::new();
    for comp in &comps {
        let mut row = Vec::new();
        for course in &courses {
            let mut n = 0u32;
            for req in &comp.topic_reqs {
                let covered = all_outcomes(doc).into_iter().any(|(c, o)| {
                    c == course
                        && o.targets
                            .iter()
                            .any(|t| t.topic == req.topic && at_least(t.level, req.level))
                });
                n += u32::from(covered);
            }
            row.push(n);
        }
        cells.push(row);
    }
    CoverageMatrix {
        competencies: comps.iter().map(|c| c.id.clone()).collect(),
        courses,
        cells,
    }
}

pub fn gaps(doc: &ModelDoc, strict: bool) -> GapReport {
    let mut report = GapReport::default();
    for r in reports(doc, strict) {
        let mut list = Vec::new();
        for s in r.statuses {
            if s.satisfied {
                continue;
            }
            let reason = match &s.requirement {
                Requirement::Topic { .. } if s.best_offer.is_none() => GapReason::Untaught,
                Requirement::Topic { .. } => GapReason::UnderLevel,
                Requirement::Skill { .. } => GapReason::SkillMissing,
                Requirement::Disposition { .. } => GapReason::DispositionMissing,
            };
            list.push(Gap {
                requirement: s.requirement,
                reason,
                best_offer: s.best_offer,
            });
        }
        if !list.is_empty() {
            report.competencies.push(CompetencyGaps {
                competency: r.competency,
                gaps: list,
            });
        }
    }
    let required: BTreeSet<&str> = competencies(doc)
        .iter()
        .flat_map(|c| c.topic_reqs.iter().map(|r| r.topic.as_str()))
        .collect();
    let taught: BTreeSet<&str> = all_outcomes(doc)
        .into_iter()
        .flat_map(|(_, o)| o.targets.iter().map(|t| t.topic.as_str()))
        .collect();
    report.orphan_topics = taught
        .difference(&required)
        .map(|s| s.to_string())
        .collect();
    report.untaught_topics = required
        .difference(&taught)
        .map(|s| s.to_string())
        .collect();
    report
}

/// Per-block mean topic fraction, plus the blocks that should be flagged.
pub struct Profile {
    pub blocks: Vec<(u32, Q, bool)>,
    pub warned: Vec<u32>,
}

pub fn profile(doc: &ModelDoc, pathway: &str, strict: bool) -> Option<Profile> {
    let pw = doc.pathways.iter().find(|p| p.id == pathway)?;
    let mut blocks: Vec<(u32, Q, bool)> = doc
        .blocks
        .iter()
        .map(|b| {
            let fs: Vec<Q> = b
                .competencies
                .iter()
                .map(|c| {
                    let r = report(doc, c, strict);
                    Q::new(r.satisfied_topics() as u128, c.topic_reqs.len() as u128)
                })
                .collect();
            (b.id, Q::mean(&fs), pw.emphasized_blocks.contains(&b.id))
        })
        .collect();
    blocks.sort_by_key(|b| b.0);
    let others: Vec<Q> = blocks.iter().filter(|b| !b.2).map(|b| b.1).collect();
    let warned = if others.is_empty() {
        Vec::new()
    } else {
        let base = Q::mean(&others);
        blocks
            .iter()
            .filter(|b| b.2 && b.1.less_than(base))
            .map(|b| b.0)
            .collect()
    };
    Some(Profile { blocks, warned })
}

/// Applies `delta` to a copy of `doc`: creations, then removals, then
/// additions. `None` when any edit does not resolve or an outcome ends up
/// with no targets.
pub fn apply(doc: &ModelDoc, delta: &WhatIfDelta) -> Option<ModelDoc> {
    let topic_exists = |t: &str| {
        doc.catalogs
            .iter()
            .flat_map(|c| &c.areas)
            .flat_map(|a| &a.topics)
            .any(|x| x.id == t)
    };
    let mut out = doc.clone();
    let mut touched: BTreeSet<(String, String)> = BTreeSet::new();
    for c in &delta.create {
        let slug = !c.outcome.is_empty()
            && c.outcome
                .chars()
                .next()
                .is_some_and(|ch| ch.is_ascii_lowercase() || ch.is_ascii_digit())
            && c.outcome
                .chars()
                .all(|ch| ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '-' || ch == '_');
        let course = out.courses.iter_mut().find(|k| k.id == c.course)?;
        if !slug || course.outcomes.iter().any(|o| o.id == c.outcome) {
            return None;
        }
        course.outcomes.push(LearningOutcome {
            id: c.outcome.clone(),
            statement: c.statement.clone(),
            targets: Vec::new(),
            skills_exercised: BTreeSet::new(),
            dispositions_exercised: BTreeSet::new(),
        });
        touched.insert((c.course.clone(), c.outcome.clone()));
    }
    let find = |out: &ModelDoc, course: &str, outcome: &str| -> Option<usize> {
        out.courses
            .iter()
            .position(|k| k.id == course)
            .and_then(|k| {
                out.courses[k]
                    .outcomes
                    .iter()
                    .position(|o| o.id == outcome)
                    .map(|o| k * 10_000 + o)
            })
    };
    for e in delta.remove.iter().chain(&delta.add) {
        if !topic_exists(&e.topic) || find(&out, &e.course, &e.outcome).is_none() {
            return None;
        }
    }
    for e in &delta.remove {
        let at = find(&out, &e.course, &e.outcome)?;
        let o = &mut out.courses[at / 10_000].outcomes[at % 10_000];
        let i = o
            .targets
            .iter()
            .position(|t| t.topic == e.topic && t.level == e.level)?;
        o.targets.remove(i);
        touched.insert((e.course.clone(), e.outcome.clone()));
    }
    for e in &delta.add {
        let at = find(&out, &e.course, &e.outcome)?;
        let o = &mut out.courses[at / 10_000].outcomes[at % 10_000];
        match o.targets.iter_mut().find(|t| t.topic == e.topic) {
            Some(t) if rank(e.level) > rank(t.level) => t.level = e.level,
            Some(_) => {}
            None => o.targets.push(TopicRequirement::new(&e.topic, e.level)),
        }
        touched.insert((e.course.clone(), e.outcome.clone()));
    }
    for (course, outcome) in &touched {
        let at = find(&out, course, outcome)?;
        if out.courses[at / 10_000].outcomes[at % 10_000]
            .targets
            .is_empty()
        {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce_and_average() {
        assert_eq!(Q::new(2, 4), Q(1, 2));
        assert_eq!(Q::mean(&[Q(1, 2), Q(1, 3)]), Q(5, 12));
        assert_eq!(Q::mean(&[]), Q(0, 1));
        assert!(Q(1, 3).less_than(Q(1, 2)));
    }

    #[test]
    fn rank_follows_the_code_sequence() {
        assert_eq!(rank(BloomLevel::A1), 0);
        assert_eq!(rank(BloomLevel::C2), 5);
        assert!(at_least(BloomLevel::B2, BloomLevel::B1));
        assert!(!at_least(BloomLevel::A2, BloomLevel::B1));
    }
}
