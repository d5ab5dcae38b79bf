//! Coverage and gap analytics.
//!
//! A topic requirement is satisfied when some outcome targets the topic at
//! or above the required level; there is no partial credit. Skill and
//! disposition requirements are satisfied when any outcome exercises them,
//! or, with [`CoverageOptions::strict_fpk`], any outcome of a course that
//! also teaches one of the competency's required topics.
//!
//! The teaching side is held in a [`Teaching`] index so that what-if
//! overlays can swap it without touching the graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::diag::{DiagCode, Diagnostic, SourceSpan};
use crate::error::Result;
use crate::graph::{EdgeKind, Graph, NodeIdx, NodeKind};
use crate::model::{bloom_geq, BloomLevel, OutcomeRef};

/// Exact non-negative rational, always in lowest terms. Coverage values
/// lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(Ratio<u64>);

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        if den == 0 {
            Fraction::zero()
        } else {
            Fraction(Ratio::new(num, den))
        }
    }

    pub fn zero() -> Self {
        Fraction(Ratio::new(0, 1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Exact mean of `fractions`; zero for an empty slice.
    pub fn mean(fractions: &[Fraction]) -> Fraction {
        if fractions.is_empty() {
            return Fraction::zero();
        }
        let sum = fractions
            .iter()
            .fold(Ratio::new(0u64, 1), |acc, f| acc + f.0);
        Fraction(sum / Ratio::from_integer(fractions.len() as u64))
    }
}

impl From<Ratio<u64>> for Fraction {
    fn from(r: Ratio<u64>) -> Self {
        Fraction(r)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Fraction", 3)?;
        st.serialize_field("num", &self.numer())?;
        st.serialize_field("den", &self.denom())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoverageOptions {
    /// Only credit skills and dispositions exercised by courses that also
    /// teach one of the competency's required topics.
    pub strict_fpk: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Offer {
    pub course: String,
    pub outcome: String,
    pub level: BloomLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Requirement {
    Topic { topic: String, level: BloomLevel },
    Skill { id: String },
    Disposition { id: String },
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Topic { topic, level } => write!(f, "{topic} @ {level}"),
            Requirement::Skill { id } => write!(f, "skill {id}"),
            Requirement::Disposition { id } => write!(f, "disposition {id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RequirementStatus {
    pub requirement: Requirement,
    pub satisfied: bool,
    /// Highest-level offer for a topic requirement, if any outcome targets
    /// the topic at all.
    pub best_offer: Option<Offer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub competency: String,
    pub statuses: Vec<RequirementStatus>,
    pub topic_fraction: Fraction,
    pub skills_ok: bool,
    pub dispositions_ok: bool,
}

impl CoverageReport {
    pub fn satisfied_topics(&self) -> usize {
        self.statuses
            .iter()
            .filter(|s| s.satisfied && matches!(s.requirement, Requirement::Topic { .. }))
            .count()
    }
}

/// Competency-by-course counts of topic requirements satisfied by each
/// course on its own. Rows and columns are sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageMatrix {
    pub competencies: Vec<String>,
    pub courses: Vec<String>,
    pub cells: Vec<Vec<u32>>,
}

impl CoverageMatrix {
    pub fn cell(&self, competency: &str, course: &str) -> Option<u32> {
        let r = self.competencies.iter().position(|c| c == competency)?;
        let k = self.courses.iter().position(|c| c == course)?;
        Some(self.cells[r][k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GapReason {
    Untaught,
    UnderLevel,
    SkillMissing,
    DispositionMissing,
}

impl GapReason {
    pub fn as_str(self) -> &'static str {
        match self {
            GapReason::Untaught => "UNTAUGHT",
            GapReason::UnderLevel => "UNDER_LEVEL",
            GapReason::SkillMissing => "SKILL_MISSING",
            GapReason::DispositionMissing => "DISPOSITION_MISSING",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub requirement: Requirement,
    pub reason: GapReason,
    pub best_offer: Option<Offer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompetencyGaps {
    pub competency: String,
    pub gaps: Vec<Gap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GapReport {
    /// Competencies with at least one unsatisfied requirement, by id.
    pub competencies: Vec<CompetencyGaps>,
    /// Topics some outcome targets but no competency requires.
    pub orphan_topics: Vec<String>,
    /// Topics some competency requires but no outcome targets.
    pub untaught_topics: Vec<String>,
}

impl GapReport {
    pub fn is_empty(&self) -> bool {
        self.competencies.is_empty()
            && self.orphan_topics.is_empty()
            && self.untaught_topics.is_empty()
    }

    pub fn gap_count(&self) -> usize {
        self.competencies.iter().map(|c| c.gaps.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockProfile {
    pub block: u32,
    pub title: String,
    pub competencies: usize,
    pub mean_fraction: Fraction,
    pub emphasized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathwayProfile {
    pub pathway: String,
    pub blocks: Vec<BlockProfile>,
    pub warnings: Vec<Diagnostic>,
}

/// What one outcome teaches.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutcomeTeaching {
    pub targets: BTreeMap<String, BloomLevel>,
    pub skills: BTreeSet<String>,
    pub dispositions: BTreeSet<String>,
}

/// The teaching side of a model: every outcome's targets and exercised
/// skills and dispositions, indexed by topic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Teaching {
    outcomes: BTreeMap<OutcomeRef, OutcomeTeaching>,
    courses: Vec<String>,
    by_topic: HashMap<String, Vec<Offer>>,
    skill_courses: HashMap<String, BTreeSet<String>>,
    disposition_courses: HashMap<String, BTreeSet<String>>,
}

impl Teaching {
    pub fn from_graph(graph: &Graph) -> Teaching {
        let mut outcomes = BTreeMap::new();
        for idx in 0..graph.node_count() {
            let node = graph.node(idx);
            if node.key.kind != NodeKind::Outcome {
                continue;
            }
            let r: OutcomeRef = node.key.id.parse().expect("outcome ids are qualified");
            let mut t = OutcomeTeaching::default();
            for e in graph.outgoing(idx) {
                let to = graph.id(e.to).to_string();
                match e.kind {
                    EdgeKind::OutcomeTargetsTopic(level) => {
                        t.targets.insert(to, level);
                    }
                    EdgeKind::OutcomeExercisesSkill => {
                        t.skills.insert(to);
                    }
                    EdgeKind::OutcomeExercisesDisposition => {
                        t.dispositions.insert(to);
                    }
                    _ => {}
                }
            }
            outcomes.insert(r, t);
        }
        let courses = graph
            .ids(NodeKind::Course)
            .into_iter()
            .map(String::from)
            .collect();
        let mut teaching = Teaching {
            outcomes,
            courses,
            ..Teaching::default()
        };
        teaching.reindex();
        teaching
    }

    fn reindex(&mut self) {
        self.by_topic.clear();
        self.skill_courses.clear();
        self.disposition_courses.clear();
        for (r, t) in &self.outcomes {
            for (topic, &level) in &t.targets {
                self.by_topic.entry(topic.clone()).or_default().push(Offer {
                    course: r.course.clone(),
                    outcome: r.outcome.clone(),
                    level,
                });
            }
            for s in &t.skills {
                self.skill_courses
                    .entry(s.clone())
                    .or_default()
                    .insert(r.course.clone());
            }
            for d in &t.dispositions {
                self.disposition_courses
                    .entry(d.clone())
                    .or_default()
                    .insert(r.course.clone());
            }
        }
    }

    pub fn outcome(&self, r: &OutcomeRef) -> Option<&OutcomeTeaching> {
        self.outcomes.get(r)
    }

    /// Replaces (or inserts) outcome teaching entries, then rebuilds the
    /// topic index.
    pub fn with_outcomes(
        mut self,
        replaced: impl IntoIterator<Item = (OutcomeRef, OutcomeTeaching)>,
    ) -> Teaching {
        self.outcomes.extend(replaced);
        self.reindex();
        self
    }

    /// Every outcome offering `topic`, at any level.
    pub fn offers(&self, topic: &str) -> &[Offer] {
        self.by_topic.get(topic).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn courses(&self) -> &[String] {
        &self.courses
    }

    pub fn is_taught(&self, topic: &str) -> bool {
        !self.offers(topic).is_empty()
    }

    fn taught_topics(&self) -> impl Iterator<Item = &String> {
        self.by_topic.keys()
    }
}

/// Highest level first, then smallest course id, then smallest outcome id.
fn best_offer(offers: &[Offer]) -> Option<&Offer> {
    offers.iter().min_by(|a, b| {
        b.level
            .cmp(&a.level)
            .then_with(|| a.course.cmp(&b.course))
            .then_with(|| a.outcome.cmp(&b.outcome))
    })
}

/// Coverage queries over one graph and one teaching view.
pub struct Analyzer<'g> {
    graph: &'g Graph,
    teaching: Teaching,
    options: CoverageOptions,
}

impl<'g> Analyzer<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Analyzer::with_teaching(graph, Teaching::from_graph(graph))
    }

    pub fn with_teaching(graph: &'g Graph, teaching: Teaching) -> Self {
        Analyzer {
            graph,
            teaching,
            options: CoverageOptions::default(),
        }
    }

    pub fn options(mut self, options: CoverageOptions) -> Self {
        self.options = options;
        self
    }

    pub fn teaching(&self) -> &Teaching {
        &self.teaching
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn competency_coverage(&self, competency: &str) -> Result<CoverageReport> {
        let c = self.graph.require(NodeKind::Competency, competency)?;
        Ok(self.report(c))
    }

    fn report(&self, c: NodeIdx) -> CoverageReport {
        let reqs = self.graph.requirements(c);
        let mut statuses = Vec::new();
        let mut satisfied = 0u64;
        for req in &reqs {
            let offers = self.teaching.offers(&req.topic);
            let best = best_offer(offers).cloned();
            let ok = best.as_ref().is_some_and(|b| bloom_geq(b.level, req.level));
            satisfied += u64::from(ok);
            statuses.push(RequirementStatus {
                requirement: Requirement::Topic {
                    topic: req.topic.clone(),
                    level: req.level,
                },
                satisfied: ok,
                best_offer: best,
            });
        }

        let sharing: Option<BTreeSet<&str>> = self.options.strict_fpk.then(|| {
            reqs.iter()
                .flat_map(|r| self.teaching.offers(&r.topic))
                .map(|o| o.course.as_str())
                .collect()
        });
        let exercised = |courses: Option<&BTreeSet<String>>| match (courses, &sharing) {
            (None, _) => false,
            (Some(cs), None) => !cs.is_empty(),
            (Some(cs), Some(share)) => cs.iter().any(|k| share.contains(k.as_str())),
        };

        let mut skills_ok = true;
        for s in self.graph.targets(c, EdgeKind::CompetencyRequiresSkill) {
            let ok = exercised(self.teaching.skill_courses.get(s));
            skills_ok &= ok;
            statuses.push(RequirementStatus {
                requirement: Requirement::Skill { id: s.to_string() },
                satisfied: ok,
                best_offer: None,
            });
        }
        let mut dispositions_ok = true;
        for d in self
            .graph
            .targets(c, EdgeKind::CompetencyRequiresDisposition)
        {
            let ok = exercised(self.teaching.disposition_courses.get(d));
            dispositions_ok &= ok;
            statuses.push(RequirementStatus {
                requirement: Requirement::Disposition { id: d.to_string() },
                satisfied: ok,
                best_offer: None,
            });
        }

        CoverageReport {
            competency: self.graph.id(c).to_string(),
            statuses,
            topic_fraction: Fraction::new(satisfied, reqs.len() as u64),
            skills_ok,
            dispositions_ok,
        }
    }

    /// Reports for every competency, ordered by id.
    pub fn all_reports(&self) -> Vec<CoverageReport> {
        self.competency_nodes()
            .into_iter()
            .map(|c| self.report(c))
            .collect()
    }

    fn competency_nodes(&self) -> Vec<NodeIdx> {
        self.graph
            .ids(NodeKind::Competency)
            .into_iter()
            .map(|id| {
                self.graph
                    .find(NodeKind::Competency, id)
                    .expect("listed node")
            })
            .collect()
    }

    pub fn coverage_matrix(&self) -> CoverageMatrix {
        let comps = self.competency_nodes();
        let courses = self.teaching.courses().to_vec();
        let cells = comps
            .iter()
            .map(|&c| {
                let reqs = self.graph.requirements(c);
                courses
                    .iter()
                    .map(|k| {
                        reqs.iter()
                            .filter(|r| {
                                self.teaching
                                    .offers(&r.topic)
                                    .iter()
                                    .any(|o| &o.course == k && bloom_geq(o.level, r.level))
                            })
                            .count() as u32
                    })
                    .collect()
            })
            .collect();
        CoverageMatrix {
            competencies: comps
                .iter()
                .map(|&c| self.graph.id(c).to_string())
                .collect(),
            courses,
            cells,
        }
    }

    pub fn gap_report(&self) -> GapReport {
        let mut report = GapReport::default();
        let mut required = BTreeSet::new();
        for c in self.competency_nodes() {
            for r in self.graph.requirements(c) {
                required.insert(r.topic);
            }
            let gaps: Vec<Gap> = self
                .report(c)
                .statuses
                .into_iter()
                .filter(|s| !s.satisfied)
                .map(|s| {
                    let reason = match (&s.requirement, &s.best_offer) {
                        (Requirement::Topic { .. }, None) => GapReason::Untaught,
                        (Requirement::Topic { .. }, Some(_)) => GapReason::UnderLevel,
                        (Requirement::Skill { .. }, _) => GapReason::SkillMissing,
                        (Requirement::Disposition { .. }, _) => GapReason::DispositionMissing,
                    };
                    Gap {
                        requirement: s.requirement,
                        reason,
                        best_offer: s.best_offer,
                    }
                })
                .collect();
            if !gaps.is_empty() {
                report.competencies.push(CompetencyGaps {
                    competency: self.graph.id(c).to_string(),
                    gaps,
                });
            }
        }
        let mut orphans: Vec<String> = self
            .teaching
            .taught_topics()
            .filter(|t| !required.contains(*t))
            .cloned()
            .collect();
        orphans.sort();
        report.orphan_topics = orphans;
        report.untaught_topics = required
            .into_iter()
            .filter(|t| !self.teaching.is_taught(t))
            .collect();
        report
    }

    pub fn pathway_profile(&self, pathway: &str) -> Result<PathwayProfile> {
        let p = self.graph.require(NodeKind::Pathway, pathway)?;
        let emphasized: BTreeSet<&str> = self
            .graph
            .targets(p, EdgeKind::PathwayEmphasizesBlock)
            .into_iter()
            .collect();

        let mut blocks = Vec::new();
        for idx in 0..self.graph.node_count() {
            let node = self.graph.node(idx);
            if node.key.kind != NodeKind::Block {
                continue;
            }
            let fractions: Vec<Fraction> = self
                .graph
                .outgoing(idx)
                .filter(|e| e.kind == EdgeKind::BlockContainsCompetency)
                .map(|e| self.report(e.to).topic_fraction)
                .collect();
            blocks.push(BlockProfile {
                block: node.key.id.parse().expect("block ids are integers"),
                title: node.label.clone(),
                competencies: fractions.len(),
                mean_fraction: Fraction::mean(&fractions),
                emphasized: emphasized.contains(node.key.id.as_str()),
            });
        }
        blocks.sort_by_key(|b| b.block);

        let others: Vec<Fraction> = blocks
            .iter()
            .filter(|b| !b.emphasized)
            .map(|b| b.mean_fraction)
            .collect();
        let mut warnings = Vec::new();
        if !others.is_empty() {
            let baseline = Fraction::mean(&others);
            for b in blocks
                .iter()
                .filter(|b| b.emphasized && b.mean_fraction < baseline)
            {
                warnings.push(Diagnostic::warning(
                    DiagCode::EmphasisUnderserved,
                    SourceSpan::synthetic(format!("pathway:{pathway}")),
                    format!(
                        "pathway `{pathway}` emphasizes block {} but its mean coverage {} is below the {} of the other blocks",
                        b.block, b.mean_fraction, baseline
                    ),
                ));
            }
        }
        Ok(PathwayProfile {
            pathway: pathway.to_string(),
            blocks,
            warnings,
        })
    }
}

pub fn competency_coverage(graph: &Graph, competency: &str) -> Result<CoverageReport> {
    Analyzer::new(graph).competency_coverage(competency)
}

pub fn coverage_matrix(graph: &Graph) -> CoverageMatrix {
    Analyzer::new(graph).coverage_matrix()
}

pub fn gap_report(graph: &Graph) -> GapReport {
    Analyzer::new(graph).gap_report()
}

pub fn pathway_profile(graph: &Graph, pathway: &str) -> Result<PathwayProfile> {
    Analyzer::new(graph).pathway_profile(pathway)
}
