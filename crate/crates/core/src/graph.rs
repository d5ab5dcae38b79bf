//! Typed, bidirectionally indexed graph over a validated [`Model`].
//!
//! Nodes are keyed by `(kind, id)`; outcomes use the qualified
//! `<course>/<outcome>` id. Every edge is indexed from both ends, so
//! forward (topic to competencies) and backward (competency to topics,
//! outcomes and courses) traces are adjacency lookups.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BloomLevel, Model, OutcomeRef, TopicRequirement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Block,
    Competency,
    Area,
    Topic,
    Skill,
    Disposition,
    Course,
    Outcome,
    Path,
    Object,
    Pathway,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Block => "block",
            NodeKind::Competency => "competency",
            NodeKind::Area => "area",
            NodeKind::Topic => "topic",
            NodeKind::Skill => "skill",
            NodeKind::Disposition => "disposition",
            NodeKind::Course => "course",
            NodeKind::Outcome => "outcome",
            NodeKind::Path => "path",
            NodeKind::Object => "object",
            NodeKind::Pathway => "pathway",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeKind {
    CompetencyRequiresTopic(BloomLevel),
    OutcomeTargetsTopic(BloomLevel),
    CourseHasOutcome,
    CompetencyRequiresSkill,
    CompetencyRequiresDisposition,
    OutcomeExercisesSkill,
    OutcomeExercisesDisposition,
    PathStageObject,
    ObjectAssessesOutcome,
    BlockContainsCompetency,
    PathwayEmphasizesBlock,
}

impl EdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::CompetencyRequiresTopic(_) => "COMPETENCY_REQUIRES_TOPIC",
            EdgeKind::OutcomeTargetsTopic(_) => "OUTCOME_TARGETS_TOPIC",
            EdgeKind::CourseHasOutcome => "COURSE_HAS_OUTCOME",
            EdgeKind::CompetencyRequiresSkill => "COMPETENCY_REQUIRES_SKILL",
            EdgeKind::CompetencyRequiresDisposition => "COMPETENCY_REQUIRES_DISPOSITION",
            EdgeKind::OutcomeExercisesSkill => "OUTCOME_EXERCISES_SKILL",
            EdgeKind::OutcomeExercisesDisposition => "OUTCOME_EXERCISES_DISPOSITION",
            EdgeKind::PathStageObject => "PATH_STAGE_OBJECT",
            EdgeKind::ObjectAssessesOutcome => "OBJECT_ASSESSES_OUTCOME",
            EdgeKind::BlockContainsCompetency => "BLOCK_CONTAINS_COMPETENCY",
            EdgeKind::PathwayEmphasizesBlock => "PATHWAY_EMPHASIZES_BLOCK",
        }
    }

    /// Bloom level, carried by the two topic edge kinds only.
    pub fn level(self) -> Option<BloomLevel> {
        match self {
            EdgeKind::CompetencyRequiresTopic(l) | EdgeKind::OutcomeTargetsTopic(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level() {
            Some(l) => write!(f, "{}({l})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeKey {
    pub kind: NodeKind,
    pub id: String,
}

impl NodeKey {
    pub fn new(kind: NodeKind, id: impl Into<String>) -> Self {
        NodeKey {
            kind,
            id: id.into(),
        }
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.as_str(), self.id)
    }
}

pub type NodeIdx = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub key: NodeKey,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: NodeIdx,
    pub to: NodeIdx,
}

/// One competency holding a requirement on a traced topic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ForwardHit {
    pub competency: String,
    pub level: BloomLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackwardTrace {
    pub competency: String,
    pub topics: Vec<TopicRequirement>,
    pub courses: BTreeSet<String>,
    pub outcomes: BTreeSet<OutcomeRef>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    nodes: Vec<Node>,
    index: HashMap<NodeKey, NodeIdx>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    edge_set: HashSet<Edge>,
}

impl Graph {
    /// Materializes `model`. Node and edge order follows the model's
    /// canonical order, so equal models give equal graphs.
    pub fn build(model: &Model) -> Graph {
        let mut g = Graph::default();

        for block in &model.blocks {
            g.add_node(NodeKind::Block, block.id.to_string(), &block.title);
        }
        for comp in model.competencies() {
            g.add_node(NodeKind::Competency, &comp.id, &comp.statement);
        }
        for area in model.areas() {
            g.add_node(NodeKind::Area, &area.id, &area.title);
        }
        for topic in model.topics() {
            g.add_node(NodeKind::Topic, &topic.id, &topic.title);
        }
        for skill in model.skills() {
            g.add_node(NodeKind::Skill, &skill.id, &skill.title);
        }
        for disp in model.dispositions() {
            g.add_node(NodeKind::Disposition, &disp.id, &disp.title);
        }
        for course in &model.courses {
            g.add_node(NodeKind::Course, &course.id, &course.title);
            for outcome in &course.outcomes {
                let r = OutcomeRef::new(&course.id, &outcome.id);
                g.add_node(NodeKind::Outcome, r.to_string(), &outcome.statement);
            }
        }
        for path in &model.paths {
            g.add_node(NodeKind::Path, &path.id, &path.id);
        }
        for obj in &model.objects {
            g.add_node(NodeKind::Object, &obj.id, &obj.title);
        }
        for pw in &model.pathways {
            g.add_node(NodeKind::Pathway, &pw.id, &pw.title);
        }

        for block in &model.blocks {
            for comp in &block.competencies {
                let b = g.idx(NodeKind::Block, &block.id.to_string());
                let c = g.idx(NodeKind::Competency, &comp.id);
                g.add_edge(EdgeKind::BlockContainsCompetency, b, c);
                for req in &comp.topic_reqs {
                    let t = g.idx(NodeKind::Topic, &req.topic);
                    g.add_edge(EdgeKind::CompetencyRequiresTopic(req.level), c, t);
                }
                for s in &comp.skill_reqs {
                    let s = g.idx(NodeKind::Skill, s);
                    g.add_edge(EdgeKind::CompetencyRequiresSkill, c, s);
                }
                for d in &comp.disposition_reqs {
                    let d = g.idx(NodeKind::Disposition, d);
                    g.add_edge(EdgeKind::CompetencyRequiresDisposition, c, d);
                }
            }
        }
        for course in &model.courses {
            let k = g.idx(NodeKind::Course, &course.id);
            for outcome in &course.outcomes {
                let o = g.idx(
                    NodeKind::Outcome,
                    &OutcomeRef::new(&course.id, &outcome.id).to_string(),
                );
                g.add_edge(EdgeKind::CourseHasOutcome, k, o);
                for t in &outcome.targets {
                    let ti = g.idx(NodeKind::Topic, &t.topic);
                    g.add_edge(EdgeKind::OutcomeTargetsTopic(t.level), o, ti);
                }
                for s in &outcome.skills_exercised {
                    let s = g.idx(NodeKind::Skill, s);
                    g.add_edge(EdgeKind::OutcomeExercisesSkill, o, s);
                }
                for d in &outcome.dispositions_exercised {
                    let d = g.idx(NodeKind::Disposition, d);
                    g.add_edge(EdgeKind::OutcomeExercisesDisposition, o, d);
                }
            }
        }
        for path in &model.paths {
            let p = g.idx(NodeKind::Path, &path.id);
            for obj in path.stages.iter().flatten() {
                let o = g.idx(NodeKind::Object, obj);
                g.add_edge(EdgeKind::PathStageObject, p, o);
            }
        }
        for obj in &model.objects {
            let o = g.idx(NodeKind::Object, &obj.id);
            for a in &obj.assessments {
                for r in &a.outcome_refs {
                    let target = g.idx(NodeKind::Outcome, &r.to_string());
                    g.add_edge(EdgeKind::ObjectAssessesOutcome, o, target);
                }
            }
        }
        for pw in &model.pathways {
            let p = g.idx(NodeKind::Pathway, &pw.id);
            for b in &pw.emphasized_blocks {
                let bi = g.idx(NodeKind::Block, &b.to_string());
                g.add_edge(EdgeKind::PathwayEmphasizesBlock, p, bi);
            }
        }
        g
    }

    fn add_node(&mut self, kind: NodeKind, id: impl Into<String>, label: &str) {
        let key = NodeKey::new(kind, id);
        if self.index.contains_key(&key) {
            return;
        }
        self.index.insert(key.clone(), self.nodes.len());
        self.nodes.push(Node {
            key,
            label: label.to_string(),
        });
        self.outgoing.push(Vec::new());
        self.incoming.push(Vec::new());
    }

    // Validated models resolve every reference.
    fn idx(&self, kind: NodeKind, id: &str) -> NodeIdx {
        self.index[&NodeKey::new(kind, id)]
    }

    fn add_edge(&mut self, kind: EdgeKind, from: NodeIdx, to: NodeIdx) {
        let edge = Edge { kind, from, to };
        if !self.edge_set.insert(edge) {
            return;
        }
        let i = self.edges.len();
        self.edges.push(edge);
        self.outgoing[from].push(i);
        self.incoming[to].push(i);
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, idx: NodeIdx) -> &Node {
        &self.nodes[idx]
    }

    pub fn find(&self, kind: NodeKind, id: &str) -> Option<NodeIdx> {
        self.index.get(&NodeKey::new(kind, id)).copied()
    }

    pub fn contains(&self, kind: NodeKind, id: &str) -> bool {
        self.find(kind, id).is_some()
    }

    pub fn id(&self, idx: NodeIdx) -> &str {
        &self.nodes[idx].key.id
    }

    pub fn outgoing(&self, idx: NodeIdx) -> impl Iterator<Item = &Edge> {
        self.outgoing[idx].iter().map(|&e| &self.edges[e])
    }

    pub fn incoming(&self, idx: NodeIdx) -> impl Iterator<Item = &Edge> {
        self.incoming[idx].iter().map(|&e| &self.edges[e])
    }

    /// Ids of all nodes of `kind`, sorted.
    pub fn ids(&self, kind: NodeKind) -> Vec<&str> {
        let mut ids: Vec<&str> = self
            .nodes
            .iter()
            .filter(|n| n.key.kind == kind)
            .map(|n| n.key.id.as_str())
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn count_nodes(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.key.kind == kind).count()
    }

    pub fn count_edges(&self, pred: impl Fn(EdgeKind) -> bool) -> usize {
        self.edges.iter().filter(|e| pred(e.kind)).count()
    }

    pub(crate) fn require(&self, kind: NodeKind, id: &str) -> Result<NodeIdx> {
        self.find(kind, id)
            .ok_or_else(|| Error::unknown(kind.as_str(), id))
    }

    /// Topic requirements of a competency, in declaration order.
    pub fn requirements(&self, comp: NodeIdx) -> Vec<TopicRequirement> {
        self.outgoing(comp)
            .filter_map(|e| match e.kind {
                EdgeKind::CompetencyRequiresTopic(level) => {
                    Some(TopicRequirement::new(self.id(e.to), level))
                }
                _ => None,
            })
            .collect()
    }

    /// Targets of kind `edge` leaving `from`, as sorted ids.
    pub fn targets(&self, from: NodeIdx, edge: EdgeKind) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .outgoing(from)
            .filter(|e| e.kind == edge)
            .map(|e| self.id(e.to))
            .collect();
        out.sort_unstable();
        out
    }

    /// Course owning an outcome node.
    pub fn owner_course(&self, outcome: NodeIdx) -> &str {
        self.incoming(outcome)
            .find(|e| e.kind == EdgeKind::CourseHasOutcome)
            .map(|e| self.id(e.from))
            .expect("every outcome belongs to a course")
    }

    /// Competencies that hold a requirement on `topic`, ordered by id.
    pub fn trace_forward(&self, topic: &str) -> Result<Vec<ForwardHit>> {
        let t = self.require(NodeKind::Topic, topic)?;
        let mut hits: Vec<ForwardHit> = self
            .incoming(t)
            .filter_map(|e| match e.kind {
                EdgeKind::CompetencyRequiresTopic(level) => Some(ForwardHit {
                    competency: self.id(e.from).to_string(),
                    level,
                }),
                _ => None,
            })
            .collect();
        hits.sort();
        Ok(hits)
    }

    /// The competency's topic requirements, plus every outcome targeting any
    /// of those topics (at any level) and the courses owning them.
    pub fn trace_backward(&self, competency: &str) -> Result<BackwardTrace> {
        let c = self.require(NodeKind::Competency, competency)?;
        let topics = self.requirements(c);
        let mut outcomes = BTreeSet::new();
        let mut courses = BTreeSet::new();
        for req in &topics {
            let t = self.idx(NodeKind::Topic, &req.topic);
            for e in self.incoming(t) {
                if let EdgeKind::OutcomeTargetsTopic(_) = e.kind {
                    let r: OutcomeRef = self.id(e.from).parse().expect("outcome ids are qualified");
                    courses.insert(r.course.clone());
                    outcomes.insert(r);
                }
            }
        }
        Ok(BackwardTrace {
            competency: competency.to_string(),
            topics,
            courses,
            outcomes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;
    use crate::validate::validate;

    fn model(extra: &str) -> Model {
        let text = format!(
            r#"catalog "C" {{
  area a "A" {{ topic t1 "T1" topic t2 "T2" topic t3 "T3" topic t4 "T4" }}
  skill s "S"
  disposition d "D"
}}
block 1 "B1"
{extra}"#
        );
        validate(&parse_str(&text, "m.cdsl").unwrap().draft).unwrap()
    }

    #[test]
    fn empty_model_gives_empty_graph() {
        let g = Graph::build(&Model::empty());
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn three_requirements_give_three_edges() {
        let m = model(
            r#"competency "1.1" in block 1 { requires a/t1 @ A1 requires a/t2 @ B1 requires a/t3 @ C2 skill s }"#,
        );
        let g = Graph::build(&m);
        assert_eq!(
            g.count_edges(|k| matches!(k, EdgeKind::CompetencyRequiresTopic(_))),
            3
        );
        assert_eq!(g.count_edges(|k| k == EdgeKind::CompetencyRequiresSkill), 1);
        assert_eq!(g.count_edges(|k| k == EdgeKind::BlockContainsCompetency), 1);
        // block, competency, area, 4 topics, skill, disposition
        assert_eq!(g.node_count(), 9);
    }

    #[test]
    fn forward_trace_returns_both_levels() {
        let m = model(
            r#"competency "1.1" in block 1 { requires a/t1 @ B1 }
competency "1.2" in block 1 { requires a/t1 @ C1 requires a/t2 @ A1 }"#,
        );
        let g = Graph::build(&m);
        let hits = g.trace_forward("a/t1").unwrap();
        assert_eq!(
            hits,
            vec![
                ForwardHit {
                    competency: "1.1".into(),
                    level: BloomLevel::B1
                },
                ForwardHit {
                    competency: "1.2".into(),
                    level: BloomLevel::C1
                },
            ]
        );
        assert!(g.trace_forward("a/t4").unwrap().is_empty());
        assert!(matches!(
            g.trace_forward("zz/none"),
            Err(Error::UnknownId { .. })
        ));
    }

    #[test]
    fn backward_trace_collects_outcomes_at_any_level() {
        let m = model(
            r#"competency "1.1" in block 1 { requires a/t1 @ C1 requires a/t2 @ A1 }
competency "1.2" in block 1 { requires a/t4 @ B1 }
course k1 "K1" { year 1 outcome o "O" { targets a/t1 @ A1 } }
course k2 "K2" { year 2 outcome p "P" { targets a/t1 @ C2 targets a/t3 @ B1 } }"#,
        );
        let g = Graph::build(&m);
        let bt = g.trace_backward("1.1").unwrap();
        assert_eq!(bt.topics.len(), 2);
        assert_eq!(
            bt.courses.iter().map(String::as_str).collect::<Vec<_>>(),
            vec!["k1", "k2"]
        );
        assert_eq!(bt.outcomes.len(), 2);

        let lonely = g.trace_backward("1.2").unwrap();
        assert_eq!(lonely.topics.len(), 1);
        assert!(lonely.courses.is_empty() && lonely.outcomes.is_empty());
        assert!(g.trace_backward("9.9").is_err());
    }

    #[test]
    fn rebuild_is_identical() {
        let m = model(r#"competency "1.1" in block 1 { requires a/t1 @ B1 }"#);
        assert_eq!(Graph::build(&m), Graph::build(&m));
    }

    #[test]
    fn duplicate_assessment_links_collapse() {
        let m = model(
            r#"competency "1.1" in block 1 { requires a/t1 @ B1 }
course k "K" { year 1 outcome o "O" { targets a/t1 @ B1 } }
object lo "LO" { assessment formative q1 { outcome k/o } assessment summative q2 { outcome k/o } }"#,
        );
        let g = Graph::build(&m);
        assert_eq!(g.count_edges(|k| k == EdgeKind::ObjectAssessesOutcome), 1);
    }
}
