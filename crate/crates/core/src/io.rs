//! Loading model directories and exporting models as DSL, JSON, wiki pages
//! or a DOT graph.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::Value;

use crate::diag::{DiagCode, Diagnostic, SourceSet, SourceSpan};
use crate::dsl;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{Model, ModelDoc};
use crate::validate::{validate, validate_doc};

pub const SCHEMA_VERSION: u64 = 1;
pub const JSON_FILE: &str = "model.json";
pub const DOT_FILE: &str = "graph.dot";

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub model: Model,
    pub warnings: Vec<Diagnostic>,
}

/// Reads every `.cdsl` file directly inside `dir`.
pub fn read_sources(dir: &Path) -> Result<SourceSet> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut set = SourceSet::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("cdsl") || !path.is_file() {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        set.insert(name, text);
    }
    Ok(set)
}

/// Parses and validates `sources` as one model. All or nothing.
pub fn load_sources(sources: &SourceSet) -> Result<Loaded> {
    let parsed = dsl::parse(sources).map_err(Error::Invalid)?;
    let model = validate(&parsed.draft).map_err(Error::Invalid)?;
    Ok(Loaded {
        model,
        warnings: parsed.warnings,
    })
}

/// Loads a model from a directory of `.cdsl` files, a single `.cdsl`
/// file, or a `.json` interchange file.
pub fn load(path: &Path) -> Result<Loaded> {
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path.display().to_string();
        return from_json(&text, &name).map(|model| Loaded {
            model,
            warnings: Vec::new(),
        });
    }
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        let mut set = SourceSet::new();
        set.insert(name, text);
        return load_sources(&set);
    }
    load_sources(&read_sources(path)?)
}

/// The JSON interchange document: the model's fields plus
/// `schema_version`, keys sorted.
pub fn to_json(model: &Model) -> String {
    let mut value = serde_json::to_value(model).expect("models serialize");
    value
        .as_object_mut()
        .expect("models serialize to objects")
        .insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub fn from_json(text: &str, file: &str) -> Result<Model> {
    let json_err = |e: serde_json::Error| {
        let (line, col) = (e.line().max(1) as u32, e.column().max(1) as u32);
        Error::Invalid(vec![Diagnostic::error(
            DiagCode::Json,
            SourceSpan::new(file, line, col, line, col + 1),
            e.to_string(),
        )])
    };
    let mut value: Value = serde_json::from_str(text).map_err(json_err)?;
    let version = value
        .as_object_mut()
        .and_then(|o| o.remove("schema_version"));
    if version.as_ref().and_then(Value::as_u64) != Some(SCHEMA_VERSION) {
        let found = version.map_or("none".to_string(), |v| v.to_string());
        return Err(Error::Invalid(vec![Diagnostic::error(
            DiagCode::Json,
            SourceSpan::synthetic(file),
            format!("unsupported schema_version {found}; expected {SCHEMA_VERSION}"),
        )]));
    }
    let doc: ModelDoc = serde_json::from_value(value).map_err(json_err)?;
    validate_doc(&doc, file).map_err(Error::Invalid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dsl,
    Json,
    Wiki,
    Dot,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 4] = [
        ExportFormat::Dsl,
        ExportFormat::Json,
        ExportFormat::Wiki,
        ExportFormat::Dot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExportFormat::Dsl => "dsl",
            ExportFormat::Json => "json",
            ExportFormat::Wiki => "wiki",
            ExportFormat::Dot => "dot",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ExportFormat::ALL
            .into_iter()
            .find(|f| f.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown export format `{s}` (expected dsl, json, wiki or dot)"))
    }
}

/// Renders `model` in `format`. An empty model gives an empty file set.
pub fn export(model: &Model, format: ExportFormat) -> SourceSet {
    if model.is_empty() {
        return SourceSet::new();
    }
    match format {
        ExportFormat::Dsl => dsl::serialize(model),
        ExportFormat::Json => SourceSet::new().with(JSON_FILE, to_json(model)),
        ExportFormat::Wiki => wiki::pages(model),
        ExportFormat::Dot => SourceSet::new().with(DOT_FILE, dot(&Graph::build(model))),
    }
}

#[cfg(unix)]
fn temp_builder() -> tempfile::Builder<'static, 'static> {
    use std::os::unix::fs::PermissionsExt;
    let mut b = tempfile::Builder::new();
    b.permissions(fs::Permissions::from_mode(0o644));
    b
}

#[cfg(not(unix))]
fn temp_builder() -> tempfile::Builder<'static, 'static> {
    tempfile::Builder::new()
}

/// Writes each file of `set` into `dir`, creating it if needed. Every file
/// is written to a temporary sibling and renamed into place.
pub fn write_file_set(set: &SourceSet, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (name, text) in set.iter() {
        let path = dir.join(name);
        let mut tmp = temp_builder()
            .tempfile_in(dir)
            .map_err(|e| Error::io(dir, e))?;
        tmp.write_all(text.as_bytes())
            .map_err(|e| Error::io(&path, e))?;
        tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
        written.push(path);
    }
    Ok(written)
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// The typed graph in Graphviz syntax, one statement per line.
pub fn dot(graph: &Graph) -> String {
    let mut out = String::from("digraph cforge {\n  rankdir=LR;\n");
    for node in graph.nodes() {
        writeln!(
            out,
            "  {} [label={}, kind={}, tooltip={}];",
            dot_quote(&node.key.to_string()),
            dot_quote(&node.key.id),
            node.key.kind.as_str(),
            dot_quote(&node.label)
        )
        .unwrap();
    }
    for edge in graph.edges() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_quote(&graph.node(edge.from).key.to_string()),
            dot_quote(&graph.node(edge.to).key.to_string()),
            dot_quote(&edge.kind.to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

mod wiki {
    use std::fmt::Write as _;

    use crate::diag::SourceSet;
    use crate::model::Model;

    const NOTE: &str = "<!-- Template and property names are illustrative. -->\n";

    fn cell(s: &str) -> String {
        s.replace('|', "{{!}}").replace('\n', " ")
    }

    pub(super) fn pages(model: &Model) -> SourceSet {
        let mut set = SourceSet::new();
        for block in &model.blocks {
            for c in &block.competencies {
                let mut p = String::from(NOTE);
                writeln!(
                    p,
                    "{{{{Competency\n|id={}\n|block={}\n|statement={}\n}}}}",
                    c.id,
                    c.block,
                    cell(&c.statement)
                )
                .unwrap();
                writeln!(
                    p,
                    "'''Block:''' [[In block::{}]] {}\n",
                    block.id,
                    cell(&block.title)
                )
                .unwrap();
                p.push_str("== Topic requirements ==\n");
                for r in &c.topic_reqs {
                    writeln!(
                        p,
                        "* [[Requires topic::{}]] {{{{Bloom level|{}}}}}",
                        r.topic, r.level
                    )
                    .unwrap();
                }
                if !c.skill_reqs.is_empty() {
                    p.push_str("\n== Skills ==\n");
                    for s in &c.skill_reqs {
                        writeln!(p, "* [[Requires skill::{s}]]").unwrap();
                    }
                }
                if !c.disposition_reqs.is_empty() {
                    p.push_str("\n== Dispositions ==\n");
                    for d in &c.disposition_reqs {
                        writeln!(p, "* [[Requires disposition::{d}]]").unwrap();
                    }
                }
                set.insert(format!("Competency_{}.wiki", c.id), p);
            }
        }
        for area in model.areas() {
            let mut p = String::from(NOTE);
            writeln!(
                p,
                "{{{{Knowledge area\n|id={}\n|title={}",
                area.id,
                cell(&area.title)
            )
            .unwrap();
            if let Some(cat) = &area.category {
                writeln!(p, "|category={}", cell(cat)).unwrap();
            }
            p.push_str("}}\n== Topics ==\n");
            for t in &area.topics {
                writeln!(p, "* [[Has topic::{}]] {}", t.id, cell(&t.title)).unwrap();
            }
            set.insert(format!("Area_{}.wiki", area.id), p);
        }
        for course in &model.courses {
            let mut p = String::from(NOTE);
            writeln!(
                p,
                "{{{{Course\n|id={}\n|title={}\n|year={}\n|ects={}\n}}}}",
                course.id,
                cell(&course.title),
                course.year,
                course.ects
            )
            .unwrap();
            for o in &course.outcomes {
                writeln!(p, "\n== Outcome {} ==\n{}", o.id, cell(&o.statement)).unwrap();
                for t in &o.targets {
                    writeln!(
                        p,
                        "* [[Targets topic::{}]] {{{{Bloom level|{}}}}}",
                        t.topic, t.level
                    )
                    .unwrap();
                }
                for s in &o.skills_exercised {
                    writeln!(p, "* [[Exercises skill::{s}]]").unwrap();
                }
                for d in &o.dispositions_exercised {
                    writeln!(p, "* [[Exercises disposition::{d}]]").unwrap();
                }
            }
            set.insert(format!("Course_{}.wiki", course.id), p);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    const TEXT: &str = r#"meta "program" "demo"
catalog "C" version "2" {
  area a "A | B" category "Cat" { topic t1 "T1" topic t2 "T \"2\"" }
  skill s "S"
  disposition d "D"
}
block 1 "One"
competency "1.1" in block 1 "Design \"things\"" { requires a/t1 @ B1 requires a/t2 @ C2 skill s disposition d }
course k "K" { year 2 ects 7.5 outcome o "O" { targets a/t1 @ B2 skill s } path p }
path p { stage { object lo } }
object lo "LO" { content "x" assessment summative q { outcome k/o } }
pathway se "SE" { emphasizes 1 }
portfolio st { achievement r "R" { created "2024-03-01" revisions 2 competency "1.1" @ B1 outcome k/o @ A2 } }
"#;

    fn model() -> Model {
        load_sources(&SourceSet::new().with("m.cdsl", TEXT))
            .unwrap()
            .model
    }

    #[test]
    fn dsl_round_trip() {
        let m = model();
        let set = export(&m, ExportFormat::Dsl);
        assert_eq!(
            set.names().collect::<Vec<_>>(),
            vec![
                "catalog.cdsl",
                "competencies.cdsl",
                "courses.cdsl",
                "pathways.cdsl",
                "portfolio.cdsl"
            ]
        );
        assert_eq!(load_sources(&set).unwrap().model, m);
        // canonical output is a fixed point
        assert_eq!(
            export(&load_sources(&set).unwrap().model, ExportFormat::Dsl),
            set
        );
    }

    #[test]
    fn json_round_trip() {
        let m = model();
        let text = to_json(&m);
        assert!(text.contains("\"schema_version\": 1"));
        assert_eq!(from_json(&text, "model.json").unwrap(), m);
    }

    #[test]
    fn json_rejects_missing_version() {
        let err = from_json("{}", "m.json").unwrap_err();
        assert_eq!(err.code(), DiagCode::Json);
        let err = from_json("{\"schema_version\": 1, \"blocks\": 3}", "m.json").unwrap_err();
        assert_eq!(err.code(), DiagCode::Json);
        assert_eq!(
            from_json("{\"schema_version\": 1}", "m.json").unwrap(),
            Model::empty()
        );
    }

    #[test]
    fn empty_model_exports_nothing() {
        for f in ExportFormat::ALL {
            assert!(export(&Model::empty(), f).is_empty(), "{f}");
        }
    }

    #[test]
    fn wiki_pages() {
        let set = export(&model(), ExportFormat::Wiki);
        assert_eq!(
            set.names().collect::<Vec<_>>(),
            vec!["Area_a.wiki", "Competency_1.1.wiki", "Course_k.wiki"]
        );
        let page = set.get("Competency_1.1.wiki").unwrap();
        assert_eq!(page.matches("[[Requires topic::").count(), 2);
        assert!(page.contains("[[In block::1]]"));
        assert!(page.contains("[[Requires skill::s]]"));
        assert!(page.contains("{{Bloom level|C2}}"));
        assert!(set.get("Area_a.wiki").unwrap().contains("|title=A {{!}} B"));
    }

    #[test]
    fn dot_lists_every_edge() {
        let m = model();
        let g = Graph::build(&m);
        let text = export(&m, ExportFormat::Dot)
            .get(DOT_FILE)
            .unwrap()
            .to_string();
        assert_eq!(text.matches(" -> ").count(), g.edge_count());
        assert!(text.contains(
            "\"competency:1.1\" -> \"topic:a/t2\" [label=\"COMPETENCY_REQUIRES_TOPIC(C2)\"];"
        ));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn load_directory() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(load(dir.path()).unwrap().model, Model::empty());

        let files = export(&model(), ExportFormat::Dsl);
        write_file_set(&files, dir.path()).unwrap();
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        assert_eq!(load(dir.path()).unwrap().model, model());

        fs::write(dir.path().join("zz.cdsl"), "block 9 {").unwrap();
        let err = load(dir.path()).unwrap_err();
        let diags = err.diagnostics();
        assert!(diags.iter().all(|d| d.span.file == "zz.cdsl"));
        assert_eq!(diags[0].code, DiagCode::Parse);
    }

    #[test]
    fn load_json_file_and_missing_dir() {
        let dir = tempfile::tempdir().unwrap();
        let written = write_file_set(&export(&model(), ExportFormat::Json), dir.path()).unwrap();
        assert_eq!(load(&written[0]).unwrap().model, model());
        let err = load(&dir.path().join("missing")).unwrap_err();
        assert_eq!(err.code(), DiagCode::Io);
    }

    #[test]
    fn load_single_dsl_file() {
        let dir = tempfile::tempdir().unwrap();
        let files = export(&model(), ExportFormat::Dsl);
        let joined: String = files.iter().map(|(_, t)| t).collect();
        let path = dir.path().join("all.cdsl");
        fs::write(&path, joined).unwrap();
        assert_eq!(load(&path).unwrap().model, model());

        fs::write(&path, "block 1 {").unwrap();
        let diags = load(&path).unwrap_err().diagnostics();
        assert_eq!(diags[0].span.file, "all.cdsl");
    }

    #[test]
    fn exports_are_deterministic() {
        for f in ExportFormat::ALL {
            assert_eq!(export(&model(), f), export(&model(), f));
        }
        assert!(parse_str(
            export(&model(), ExportFormat::Dsl)
                .get("courses.cdsl")
                .unwrap(),
            "x"
        )
        .is_ok());
    }
}
