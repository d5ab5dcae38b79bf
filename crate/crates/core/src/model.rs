//! Domain types for the competency model.
//!
//! A [`ModelDoc`] is plain data: it can be built by hand, deserialized from
//! JSON or produced from DSL sources. A [`Model`] is a `ModelDoc` that went
//! through [`crate::validate::validate`] and is therefore referentially
//! closed. `Model` derefs to `ModelDoc` but offers no mutable access.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// Cognitive proficiency level, ordered from remembering (A1) to creating (C2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BloomLevel {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

impl BloomLevel {
    pub const ALL: [BloomLevel; 6] = [
        BloomLevel::A1,
        BloomLevel::A2,
        BloomLevel::B1,
        BloomLevel::B2,
        BloomLevel::C1,
        BloomLevel::C2,
    ];

    /// Integer rank, 1 for A1 through 6 for C2.
    pub fn rank(self) -> u8 {
        match self {
            BloomLevel::A1 => 1,
            BloomLevel::A2 => 2,
            BloomLevel::B1 => 3,
            BloomLevel::B2 => 4,
            BloomLevel::C1 => 5,
            BloomLevel::C2 => 6,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            BloomLevel::A1 => "A1",
            BloomLevel::A2 => "A2",
            BloomLevel::B1 => "B1",
            BloomLevel::B2 => "B2",
            BloomLevel::C1 => "C1",
            BloomLevel::C2 => "C2",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BloomLevel::A1 => "Remembering",
            BloomLevel::A2 => "Understanding",
            BloomLevel::B1 => "Applying",
            BloomLevel::B2 => "Analyzing",
            BloomLevel::C1 => "Evaluating",
            BloomLevel::C2 => "Creating",
        }
    }
}

/// `true` iff `a` is at or above `b`.
pub fn bloom_geq(a: BloomLevel, b: BloomLevel) -> bool {
    a.rank() >= b.rank()
}

impl fmt::Display for BloomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBloomLevel(pub String);

impl fmt::Display for UnknownBloomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{}` is not a Bloom level (expected A1, A2, B1, B2, C1 or C2)",
            self.0
        )
    }
}

impl std::error::Error for UnknownBloomLevel {}

impl FromStr for BloomLevel {
    type Err = UnknownBloomLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BloomLevel::ALL
            .into_iter()
            .find(|l| l.code() == s)
            .ok_or_else(|| UnknownBloomLevel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    /// Qualified as `<area-id>/<topic-slug>`.
    pub id: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeArea {
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    pub topics: Vec<Topic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skill {
    pub id: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disposition {
    pub id: String,
    pub title: String,
}

/// A body of knowledge: areas with their topics, plus skills and dispositions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub name: String,
    pub version: String,
    pub areas: Vec<KnowledgeArea>,
    pub skills: Vec<Skill>,
    pub dispositions: Vec<Disposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TopicRequirement {
    pub topic: String,
    pub level: BloomLevel,
}

impl TopicRequirement {
    pub fn new(topic: impl Into<String>, level: BloomLevel) -> Self {
        TopicRequirement {
            topic: topic.into(),
            level,
        }
    }
}

impl fmt::Display for TopicRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.topic, self.level)
    }
}

/// Requirement bundle: topics at Bloom levels, plus boolean skill and
/// disposition requirements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Competency {
    /// Dotted `block.index` code, e.g. `1.1`.
    pub id: String,
    pub block: u32,
    pub statement: String,
    pub topic_reqs: Vec<TopicRequirement>,
    pub skill_reqs: BTreeSet<String>,
    pub disposition_reqs: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompetencyBlock {
    pub id: u32,
    pub title: String,
    pub competencies: Vec<Competency>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningOutcome {
    pub id: String,
    pub statement: String,
    pub targets: Vec<TopicRequirement>,
    pub skills_exercised: BTreeSet<String>,
    pub dispositions_exercised: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssessmentKind {
    Diagnostic,
    Formative,
    Summative,
}

impl AssessmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AssessmentKind::Diagnostic => "diagnostic",
            AssessmentKind::Formative => "formative",
            AssessmentKind::Summative => "summative",
        }
    }
}

impl FromStr for AssessmentKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "diagnostic" => Ok(AssessmentKind::Diagnostic),
            "formative" => Ok(AssessmentKind::Formative),
            "summative" => Ok(AssessmentKind::Summative),
            _ => Err(()),
        }
    }
}

/// Reference to an outcome, which is only unique within its course.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeRef {
    pub course: String,
    pub outcome: String,
}

impl OutcomeRef {
    pub fn new(course: impl Into<String>, outcome: impl Into<String>) -> Self {
        OutcomeRef {
            course: course.into(),
            outcome: outcome.into(),
        }
    }
}

impl fmt::Display for OutcomeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.course, self.outcome)
    }
}

impl FromStr for OutcomeRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once('/') {
            Some((c, o)) if !c.is_empty() && !o.is_empty() && !o.contains('/') => {
                Ok(OutcomeRef::new(c, o))
            }
            _ => Err(format!(
                "`{s}` is not an outcome reference of the form <course>/<outcome>"
            )),
        }
    }
}

impl Serialize for OutcomeRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OutcomeRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    pub id: String,
    pub kind: AssessmentKind,
    pub outcome_refs: BTreeSet<OutcomeRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningObject {
    pub id: String,
    pub title: String,
    pub content_ref: String,
    pub assessments: Vec<Assessment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningPath {
    pub id: String,
    /// Each stage is an ordered list of learning object ids.
    pub stages: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Course {
    pub id: String,
    pub title: String,
    pub year: u32,
    pub ects: f64,
    pub outcomes: Vec<LearningOutcome>,
    pub paths: Vec<String>,
}

impl Course {
    pub fn outcome(&self, id: &str) -> Option<&LearningOutcome> {
        self.outcomes.iter().find(|o| o.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pathway {
    pub id: String,
    pub title: String,
    pub emphasized_blocks: BTreeSet<u32>,
}

/// What an achievement record points at: a competency or a course outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "ref", rename_all = "lowercase")]
pub enum SpecRef {
    Competency(String),
    Outcome(OutcomeRef),
}

impl fmt::Display for SpecRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecRef::Competency(id) => write!(f, "competency {id}"),
            SpecRef::Outcome(r) => write!(f, "outcome {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedSpec {
    pub target: SpecRef,
    /// Self-assessed level.
    pub level: BloomLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AchievementRecord {
    pub id: String,
    pub student: String,
    pub title: String,
    pub linked_specs: Vec<LinkedSpec>,
    pub revisions: u32,
    pub created: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudentPortfolio {
    pub student: String,
    pub records: Vec<AchievementRecord>,
}

/// Unvalidated model data. See [`Model`] for the validated form.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelDoc {
    #[serde(default)]
    pub catalogs: Vec<Catalog>,
    #[serde(default)]
    pub blocks: Vec<CompetencyBlock>,
    #[serde(default)]
    pub courses: Vec<Course>,
    #[serde(default)]
    pub paths: Vec<LearningPath>,
    #[serde(default)]
    pub objects: Vec<LearningObject>,
    #[serde(default)]
    pub pathways: Vec<Pathway>,
    #[serde(default)]
    pub portfolios: Vec<StudentPortfolio>,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

impl ModelDoc {
    pub fn is_empty(&self) -> bool {
        self.catalogs.is_empty()
            && self.blocks.is_empty()
            && self.courses.is_empty()
            && self.paths.is_empty()
            && self.objects.is_empty()
            && self.pathways.is_empty()
            && self.portfolios.is_empty()
            && self.meta.is_empty()
    }

    pub fn areas(&self) -> impl Iterator<Item = &KnowledgeArea> {
        self.catalogs.iter().flat_map(|c| c.areas.iter())
    }

    pub fn topics(&self) -> impl Iterator<Item = &Topic> {
        self.areas().flat_map(|a| a.topics.iter())
    }

    pub fn skills(&self) -> impl Iterator<Item = &Skill> {
        self.catalogs.iter().flat_map(|c| c.skills.iter())
    }

    pub fn dispositions(&self) -> impl Iterator<Item = &Disposition> {
        self.catalogs.iter().flat_map(|c| c.dispositions.iter())
    }

    pub fn competencies(&self) -> impl Iterator<Item = &Competency> {
        self.blocks.iter().flat_map(|b| b.competencies.iter())
    }

    pub fn competency(&self, id: &str) -> Option<&Competency> {
        self.competencies().find(|c| c.id == id)
    }

    pub fn course(&self, id: &str) -> Option<&Course> {
        self.courses.iter().find(|c| c.id == id)
    }

    pub fn outcome(&self, r: &OutcomeRef) -> Option<&LearningOutcome> {
        self.course(&r.course).and_then(|c| c.outcome(&r.outcome))
    }

    pub fn portfolio(&self, student: &str) -> Option<&StudentPortfolio> {
        self.portfolios.iter().find(|p| p.student == student)
    }

    /// Sorts every id-keyed collection into canonical order. Ordered lists
    /// whose order carries meaning (topics, requirements, outcomes, stages,
    /// records) are left alone.
    pub fn canonicalize(&mut self) {
        self.catalogs.sort_by(|a, b| a.name.cmp(&b.name));
        for cat in &mut self.catalogs {
            cat.areas.sort_by(|a, b| a.id.cmp(&b.id));
            cat.skills.sort_by(|a, b| a.id.cmp(&b.id));
            cat.dispositions.sort_by(|a, b| a.id.cmp(&b.id));
        }
        self.blocks.sort_by_key(|b| b.id);
        for block in &mut self.blocks {
            block.competencies.sort_by(|a, b| a.id.cmp(&b.id));
        }
        self.courses.sort_by(|a, b| a.id.cmp(&b.id));
        self.paths.sort_by(|a, b| a.id.cmp(&b.id));
        self.objects.sort_by(|a, b| a.id.cmp(&b.id));
        self.pathways.sort_by(|a, b| a.id.cmp(&b.id));
        self.portfolios.sort_by(|a, b| a.student.cmp(&b.student));
    }
}

/// A validated, immutable model. Only [`crate::validate::validate`] builds one.
#[derive(Debug, Clone, PartialEq)]
pub struct Model(ModelDoc);

impl Model {
    pub(crate) fn from_validated(doc: ModelDoc) -> Self {
        Model(doc)
    }

    pub fn doc(&self) -> &ModelDoc {
        &self.0
    }

    /// Gives back the underlying data, e.g. to derive an edited copy.
    pub fn into_doc(self) -> ModelDoc {
        self.0
    }

    pub fn empty() -> Self {
        Model(ModelDoc::default())
    }
}

impl Deref for Model {
    type Target = ModelDoc;

    fn deref(&self) -> &ModelDoc {
        &self.0
    }
}

impl Serialize for Model {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bloom_examples() {
        assert!(bloom_geq(BloomLevel::B1, BloomLevel::A2));
        assert!(bloom_geq(BloomLevel::A1, BloomLevel::A1));
        assert!(!bloom_geq(BloomLevel::A2, BloomLevel::C2));
    }

    #[test]
    fn bloom_order_is_total_over_all_pairs() {
        for a in BloomLevel::ALL {
            for b in BloomLevel::ALL {
                let lt = a.rank() < b.rank();
                let eq = a == b;
                let gt = a.rank() > b.rank();
                assert_eq!([lt, eq, gt].iter().filter(|x| **x).count(), 1);
                if bloom_geq(a, b) && bloom_geq(b, a) {
                    assert_eq!(a, b);
                }
                for c in BloomLevel::ALL {
                    if bloom_geq(a, b) && bloom_geq(b, c) {
                        assert!(bloom_geq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn bloom_parse() {
        assert_eq!("C1".parse::<BloomLevel>().unwrap(), BloomLevel::C1);
        assert!("Z9".parse::<BloomLevel>().is_err());
        assert!("b1".parse::<BloomLevel>().is_err());
    }

    #[test]
    fn outcome_ref_parse() {
        let r: OutcomeRef = "se-101/design".parse().unwrap();
        assert_eq!(r, OutcomeRef::new("se-101", "design"));
        assert!("se-101".parse::<OutcomeRef>().is_err());
        assert!("a/b/c".parse::<OutcomeRef>().is_err());
    }
}
