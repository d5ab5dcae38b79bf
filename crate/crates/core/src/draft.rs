//! Raw, unresolved model data as produced by the parser.
//!
//! Every element keeps the span it was declared at so validation can point
//! at the offending source. References are plain strings here; resolving
//! them is the validator's job.

use crate::diag::SourceSpan;
use crate::model::{AssessmentKind, LinkedSpec, ModelDoc, OutcomeRef, TopicRequirement};

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned<T> {
    pub value: T,
    pub span: SourceSpan,
}

impl<T> Spanned<T> {
    pub fn new(value: T, span: SourceSpan) -> Self {
        Spanned { value, span }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawNamed {
    pub id: String,
    pub title: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawCatalog {
    pub name: String,
    pub version: String,
    pub areas: Vec<RawArea>,
    pub skills: Vec<RawNamed>,
    pub dispositions: Vec<RawNamed>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawArea {
    pub id: String,
    pub title: String,
    pub category: Option<String>,
    /// Topic ids are already qualified with the area id.
    pub topics: Vec<RawNamed>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawBlock {
    pub id: i64,
    pub title: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawCompetency {
    pub id: String,
    pub block: Spanned<i64>,
    pub statement: String,
    pub reqs: Vec<Spanned<TopicRequirement>>,
    pub skills: Vec<Spanned<String>>,
    pub dispositions: Vec<Spanned<String>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawOutcome {
    pub id: String,
    pub statement: String,
    pub targets: Vec<Spanned<TopicRequirement>>,
    pub skills: Vec<Spanned<String>>,
    pub dispositions: Vec<Spanned<String>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawCourse {
    pub id: String,
    pub title: String,
    pub year: Option<Spanned<i64>>,
    pub ects: Option<Spanned<f64>>,
    pub outcomes: Vec<RawOutcome>,
    pub paths: Vec<Spanned<String>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawPath {
    pub id: String,
    pub stages: Vec<Spanned<Vec<Spanned<String>>>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawAssessment {
    pub id: String,
    pub kind: AssessmentKind,
    pub outcomes: Vec<Spanned<OutcomeRef>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawObject {
    pub id: String,
    pub title: String,
    pub content: Option<String>,
    pub assessments: Vec<RawAssessment>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawPathway {
    pub id: String,
    pub title: String,
    pub emphasizes: Vec<Spanned<i64>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub id: String,
    pub title: String,
    pub revisions: Option<Spanned<i64>>,
    pub created: Option<Spanned<String>>,
    pub links: Vec<Spanned<LinkedSpec>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawPortfolio {
    pub student: String,
    pub records: Vec<RawRecord>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawMeta {
    pub key: String,
    pub value: String,
    pub span: SourceSpan,
}

/// Model-shaped raw data, the input of [`crate::validate::validate`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Draft {
    pub catalogs: Vec<RawCatalog>,
    pub blocks: Vec<RawBlock>,
    pub competencies: Vec<RawCompetency>,
    pub courses: Vec<RawCourse>,
    pub paths: Vec<RawPath>,
    pub objects: Vec<RawObject>,
    pub pathways: Vec<RawPathway>,
    pub portfolios: Vec<RawPortfolio>,
    pub meta: Vec<RawMeta>,
}

impl Draft {
    pub fn is_empty(&self) -> bool {
        *self == Draft::default()
    }

    /// Appends everything declared in `other`.
    pub fn extend(&mut self, other: Draft) {
        self.catalogs.extend(other.catalogs);
        self.blocks.extend(other.blocks);
        self.competencies.extend(other.competencies);
        self.courses.extend(other.courses);
        self.paths.extend(other.paths);
        self.objects.extend(other.objects);
        self.pathways.extend(other.pathways);
        self.portfolios.extend(other.portfolios);
        self.meta.extend(other.meta);
    }

    /// Lifts already-structured data (e.g. from JSON) into a draft. Every span
    /// points at the start of `file`.
    pub fn from_doc(doc: &ModelDoc, file: &str) -> Draft {
        let sp = || SourceSpan::synthetic(file);
        let named = |id: &str, title: &str| RawNamed {
            id: id.to_string(),
            title: title.to_string(),
            span: sp(),
        };
        let spanned = |s: &String| Spanned::new(s.clone(), sp());

        let catalogs = doc
            .catalogs
            .iter()
            .map(|c| RawCatalog {
                name: c.name.clone(),
                version: c.version.clone(),
                areas: c
                    .areas
                    .iter()
                    .map(|a| RawArea {
                        id: a.id.clone(),
                        title: a.title.clone(),
                        category: a.category.clone(),
                        topics: a.topics.iter().map(|t| named(&t.id, &t.title)).collect(),
                        span: sp(),
                    })
                    .collect(),
                skills: c.skills.iter().map(|s| named(&s.id, &s.title)).collect(),
                dispositions: c
                    .dispositions
                    .iter()
                    .map(|d| named(&d.id, &d.title))
                    .collect(),
                span: sp(),
            })
            .collect();

        let blocks = doc
            .blocks
            .iter()
            .map(|b| RawBlock {
                id: b.id as i64,
                title: b.title.clone(),
                span: sp(),
            })
            .collect();

        let competencies = doc
            .blocks
            .iter()
            .flat_map(|b| b.competencies.iter().map(move |c| (b.id, c)))
            .map(|(block, c)| RawCompetency {
                id: c.id.clone(),
                block: Spanned::new(block as i64, sp()),
                statement: c.statement.clone(),
                reqs: c
                    .topic_reqs
                    .iter()
                    .map(|r| Spanned::new(r.clone(), sp()))
                    .collect(),
                skills: c.skill_reqs.iter().map(spanned).collect(),
                dispositions: c.disposition_reqs.iter().map(spanned).collect(),
                span: sp(),
            })
            .collect();

        let courses = doc
            .courses
            .iter()
            .map(|c| RawCourse {
                id: c.id.clone(),
                title: c.title.clone(),
                year: Some(Spanned::new(c.year as i64, sp())),
                ects: Some(Spanned::new(c.ects, sp())),
                outcomes: c
                    .outcomes
                    .iter()
                    .map(|o| RawOutcome {
                        id: o.id.clone(),
                        statement: o.statement.clone(),
                        targets: o
                            .targets
                            .iter()
                            .map(|t| Spanned::new(t.clone(), sp()))
                            .collect(),
                        skills: o.skills_exercised.iter().map(spanned).collect(),
                        dispositions: o.dispositions_exercised.iter().map(spanned).collect(),
                        span: sp(),
                    })
                    .collect(),
                paths: c.paths.iter().map(spanned).collect(),
                span: sp(),
            })
            .collect();

        let paths = doc
            .paths
            .iter()
            .map(|p| RawPath {
                id: p.id.clone(),
                stages: p
                    .stages
                    .iter()
                    .map(|s| Spanned::new(s.iter().map(spanned).collect(), sp()))
                    .collect(),
                span: sp(),
            })
            .collect();

        let objects = doc
            .objects
            .iter()
            .map(|o| RawObject {
                id: o.id.clone(),
                title: o.title.clone(),
                content: Some(o.content_ref.clone()),
                assessments: o
                    .assessments
                    .iter()
                    .map(|a| RawAssessment {
                        id: a.id.clone(),
                        kind: a.kind,
                        outcomes: a
                            .outcome_refs
                            .iter()
                            .map(|r| Spanned::new(r.clone(), sp()))
                            .collect(),
                        span: sp(),
                    })
                    .collect(),
                span: sp(),
            })
            .collect();

        let pathways = doc
            .pathways
            .iter()
            .map(|p| RawPathway {
                id: p.id.clone(),
                title: p.title.clone(),
                emphasizes: p
                    .emphasized_blocks
                    .iter()
                    .map(|b| Spanned::new(*b as i64, sp()))
                    .collect(),
                span: sp(),
            })
            .collect();

        let portfolios = doc
            .portfolios
            .iter()
            .map(|p| RawPortfolio {
                student: p.student.clone(),
                records: p
                    .records
                    .iter()
                    .map(|r| RawRecord {
                        id: r.id.clone(),
                        title: r.title.clone(),
                        revisions: Some(Spanned::new(r.revisions as i64, sp())),
                        created: Some(Spanned::new(r.created.format("%Y-%m-%d").to_string(), sp())),
                        links: r
                            .linked_specs
                            .iter()
                            .map(|l| Spanned::new(l.clone(), sp()))
                            .collect(),
                        span: sp(),
                    })
                    .collect(),
                span: sp(),
            })
            .collect();

        let meta = doc
            .meta
            .iter()
            .map(|(k, v)| RawMeta {
                key: k.clone(),
                value: v.clone(),
                span: sp(),
            })
            .collect();

        Draft {
            catalogs,
            blocks,
            competencies,
            courses,
            paths,
            objects,
            pathways,
            portfolios,
            meta,
        }
    }
}
