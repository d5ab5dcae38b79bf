//! Student evidence: per-competency attainment and cohort statistics.
//!
//! Self-assessed levels are taken as stated. A link to a competency attests
//! every one of its topic requirements; a link to an outcome attests the
//! required topics that outcome targets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::coverage::Fraction;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Graph, NodeKind};
use crate::model::{bloom_geq, BloomLevel, SpecRef, StudentPortfolio, TopicRequirement};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Evidence {
    pub record: String,
    pub requirement: TopicRequirement,
    pub level: BloomLevel,
    pub via: SpecRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attainment {
    pub student: String,
    pub competency: String,
    pub fraction: Fraction,
    /// Ordered by requirement position, then record id, then level.
    pub evidence: Vec<Evidence>,
}

pub fn attainment(
    graph: &Graph,
    portfolio: &StudentPortfolio,
    competency: &str,
) -> Result<Attainment> {
    let c = graph.require(NodeKind::Competency, competency)?;
    let reqs = graph.requirements(c);

    let mut found: BTreeSet<(usize, Evidence)> = BTreeSet::new();
    for rec in &portfolio.records {
        for link in &rec.linked_specs {
            let attested: Vec<String> = match &link.target {
                SpecRef::Competency(id) => {
                    graph.require(NodeKind::Competency, id)?;
                    if id != competency {
                        continue;
                    }
                    reqs.iter().map(|r| r.topic.clone()).collect()
                }
                SpecRef::Outcome(r) => {
                    let o = graph.require(NodeKind::Outcome, &r.to_string())?;
                    graph
                        .outgoing(o)
                        .filter(|e| matches!(e.kind, EdgeKind::OutcomeTargetsTopic(_)))
                        .map(|e| graph.id(e.to).to_string())
                        .collect()
                }
            };
            for (i, req) in reqs.iter().enumerate() {
                if attested.contains(&req.topic) && bloom_geq(link.level, req.level) {
                    found.insert((
                        i,
                        Evidence {
                            record: rec.id.clone(),
                            requirement: req.clone(),
                            level: link.level,
                            via: link.target.clone(),
                        },
                    ));
                }
            }
        }
    }

    let attained: BTreeSet<usize> = found.iter().map(|(i, _)| *i).collect();
    Ok(Attainment {
        student: portfolio.student.clone(),
        competency: competency.to_string(),
        fraction: Fraction::new(attained.len() as u64, reqs.len() as u64),
        evidence: found.into_iter().map(|(_, e)| e).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohortStats {
    pub students: usize,
    pub pages: usize,
    pub specs_total: usize,
    pub revisions_total: u64,
    /// `specs_total / pages`; absent when there are no pages.
    pub specs_per_page_mean: Option<Fraction>,
}

impl CohortStats {
    pub fn mean_specs_per_page(&self) -> Result<Fraction> {
        self.specs_per_page_mean.ok_or(Error::EmptyCohort)
    }
}

pub fn cohort_stats(portfolios: &[StudentPortfolio]) -> CohortStats {
    let records = || portfolios.iter().flat_map(|p| p.records.iter());
    let pages = records().count();
    let specs_total = records().map(|r| r.linked_specs.len()).sum::<usize>();
    CohortStats {
        students: portfolios.len(),
        pages,
        specs_total,
        revisions_total: records().map(|r| u64::from(r.revisions)).sum(),
        specs_per_page_mean: (pages > 0).then(|| Fraction::new(specs_total as u64, pages as u64)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    use crate::dsl::parse_str;
    use crate::model::{AchievementRecord, LinkedSpec, Model, OutcomeRef};
    use crate::validate::validate;

    fn model() -> Model {
        let text = r#"catalog "C" { area a "A" { topic t1 "" topic t2 "" topic t3 "" topic t4 "" } }
block 1 "One"
competency "1.1" in block 1 { requires a/t1 @ B1 requires a/t2 @ A2 requires a/t3 @ C1 requires a/t4 @ A1 }
competency "1.2" in block 1 { requires a/t1 @ A1 }
course k "K" { year 1 outcome o "" { targets a/t2 @ A2 } outcome p "" { targets a/t1 @ A1 targets a/t3 @ A1 } }"#;
        validate(&parse_str(text, "m.cdsl").unwrap().draft).unwrap()
    }

    fn record(id: &str, links: Vec<LinkedSpec>) -> AchievementRecord {
        AchievementRecord {
            id: id.into(),
            student: "s".into(),
            title: String::new(),
            linked_specs: links,
            revisions: 1,
            created: NaiveDate::from_ymd_opt(2024, 1, 1).unwrap(),
        }
    }

    fn comp(id: &str, level: BloomLevel) -> LinkedSpec {
        LinkedSpec {
            target: SpecRef::Competency(id.into()),
            level,
        }
    }

    fn outcome(o: &str, level: BloomLevel) -> LinkedSpec {
        LinkedSpec {
            target: SpecRef::Outcome(OutcomeRef::new("k", o)),
            level,
        }
    }

    fn portfolio(records: Vec<AchievementRecord>) -> StudentPortfolio {
        StudentPortfolio {
            student: "s".into(),
            records,
        }
    }

    #[test]
    fn empty_portfolio() {
        let g = Graph::build(&model());
        let a = attainment(&g, &portfolio(vec![]), "1.1").unwrap();
        assert_eq!(a.fraction, Fraction::zero());
        assert!(a.evidence.is_empty());
    }

    #[test]
    fn competency_link_dominates() {
        let g = Graph::build(&model());
        let a = attainment(
            &g,
            &portfolio(vec![record("r", vec![comp("1.1", BloomLevel::C2)])]),
            "1.1",
        )
        .unwrap();
        assert_eq!(a.fraction, Fraction::new(1, 1));
        assert_eq!(a.evidence.len(), 4);
        let low = attainment(
            &g,
            &portfolio(vec![record("r", vec![comp("1.1", BloomLevel::A2)])]),
            "1.1",
        )
        .unwrap();
        assert_eq!(low.fraction, Fraction::new(2, 4));
    }

    #[test]
    fn outcome_link_attests_its_targets() {
        let g = Graph::build(&model());
        let a = attainment(
            &g,
            &portfolio(vec![record("r", vec![outcome("o", BloomLevel::A2)])]),
            "1.1",
        )
        .unwrap();
        assert_eq!(a.fraction, Fraction::new(1, 4));
        // t1 needs B1, t3 needs C1: only t1 reached
        let b = attainment(
            &g,
            &portfolio(vec![record("r", vec![outcome("p", BloomLevel::B2)])]),
            "1.1",
        )
        .unwrap();
        assert_eq!(b.fraction, Fraction::new(1, 4));
        assert!(b
            .evidence
            .iter()
            .all(|e| bloom_geq(e.level, e.requirement.level)));
    }

    #[test]
    fn links_to_other_competencies_are_ignored() {
        let g = Graph::build(&model());
        let a = attainment(
            &g,
            &portfolio(vec![record("r", vec![comp("1.2", BloomLevel::C2)])]),
            "1.1",
        )
        .unwrap();
        assert_eq!(a.fraction, Fraction::zero());
    }

    #[test]
    fn unknown_ids() {
        let g = Graph::build(&model());
        assert!(matches!(
            attainment(&g, &portfolio(vec![]), "7.7"),
            Err(Error::UnknownId { .. })
        ));
        let bad = portfolio(vec![record("r", vec![outcome("zz", BloomLevel::A1)])]);
        assert!(matches!(
            attainment(&g, &bad, "1.1"),
            Err(Error::UnknownId { .. })
        ));
    }

    #[test]
    fn cohort_examples() {
        let one = cohort_stats(&[portfolio(vec![record("r", vec![])])]);
        assert_eq!((one.pages, one.specs_total), (1, 0));
        assert_eq!(one.mean_specs_per_page().unwrap(), Fraction::zero());

        let four = |id: &str| record(id, vec![comp("1.1", BloomLevel::A1); 4]);
        let two = cohort_stats(&[
            portfolio(vec![four("a"), four("b")]),
            portfolio(vec![four("c"), four("d"), four("e")]),
        ]);
        assert_eq!((two.students, two.pages, two.specs_total), (2, 5, 20));
        assert_eq!(two.mean_specs_per_page().unwrap(), Fraction::new(4, 1));
        assert_eq!(two.revisions_total, 5);
    }

    #[test]
    fn empty_cohort_has_no_mean() {
        let s = cohort_stats(&[]);
        assert_eq!(s.pages, 0);
        assert!(matches!(s.mean_specs_per_page(), Err(Error::EmptyCohort)));
        let s = cohort_stats(&[portfolio(vec![])]);
        assert_eq!(s.students, 1);
        assert!(s.mean_specs_per_page().is_err());
    }
}
