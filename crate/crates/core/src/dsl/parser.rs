//! Recursive-descent parser for `.cdsl` sources.
//!
//! Declarations are keyword-led and may appear in any order and any file.
//! Syntax errors are reported with the span of the offending token; the
//! parser then resynchronises on the next item (inside braces) or the next
//! top-level keyword, so one run reports as many independent errors as it
//! can.

use std::collections::HashMap;

use super::lexer::{tokenize, Token, TokenKind};
use crate::diag::{DiagCode, Diagnostic, SourceSpan};
use crate::draft::*;
use crate::model::{AssessmentKind, BloomLevel, LinkedSpec, OutcomeRef, SpecRef, TopicRequirement};
use crate::whatif::{OutcomeCreation, TargetEdit, WhatIfDelta};

/// Marker for an error that has already been pushed to `diags`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Reported;

pub(crate) type PResult<T> = Result<T, Reported>;

const TOP_LEVEL: &[&str] = &[
    "catalog",
    "block",
    "competency",
    "course",
    "path",
    "object",
    "pathway",
    "portfolio",
    "meta",
];

pub(crate) struct Parser<'a> {
    file: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    depth: i32,
    pub diags: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    pub fn new(text: &str, file: &'a str) -> Self {
        let mut diags = Vec::new();
        let tokens = tokenize(text, file, &mut diags);
        Parser {
            file,
            tokens,
            pos: 0,
            depth: 0,
            diags,
        }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn peek_word(&self) -> Option<&str> {
        match &self.peek().kind {
            TokenKind::Word(w) => Some(w.as_str()),
            _ => None,
        }
    }

    pub fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn at_word(&self, kw: &str) -> bool {
        self.peek_word() == Some(kw)
    }

    pub fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        match tok.kind {
            TokenKind::LBrace => self.depth += 1,
            TokenKind::RBrace => self.depth -= 1,
            TokenKind::Eof => return tok,
            _ => {}
        }
        self.pos += 1;
        tok
    }

    pub fn span(&self) -> SourceSpan {
        self.peek().span(self.file)
    }

    pub fn error_at(
        &mut self,
        code: DiagCode,
        span: SourceSpan,
        msg: impl Into<String>,
    ) -> Reported {
        self.diags.push(Diagnostic::error(code, span, msg));
        Reported
    }

    pub fn expected(&mut self, what: &str) -> Reported {
        let found = self.peek().describe();
        let span = self.span();
        self.error_at(
            DiagCode::Parse,
            span,
            format!("expected {what}, found {found}"),
        )
    }

    pub fn expect_keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        if self.at_word(kw) {
            Ok(self.bump().span(self.file))
        } else {
            Err(self.expected(&format!("`{kw}`")))
        }
    }

    pub fn expect_word(&mut self, what: &str) -> PResult<Spanned<String>> {
        match self.peek().kind.clone() {
            TokenKind::Word(w) => {
                let span = self.bump().span(self.file);
                Ok(Spanned::new(w, span))
            }
            _ => Err(self.expected(what)),
        }
    }

    /// A word or a quoted string, for ids such as `"1.1"`.
    fn expect_id(&mut self, what: &str) -> PResult<Spanned<String>> {
        match self.peek().kind.clone() {
            TokenKind::Word(w) | TokenKind::Str(w) => {
                let span = self.bump().span(self.file);
                Ok(Spanned::new(w, span))
            }
            _ => Err(self.expected(what)),
        }
    }

    fn expect_str(&mut self, what: &str) -> PResult<String> {
        match self.peek().kind.clone() {
            TokenKind::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.expected(what)),
        }
    }

    fn opt_str(&mut self) -> Option<String> {
        match self.peek().kind.clone() {
            TokenKind::Str(s) => {
                self.bump();
                Some(s)
            }
            _ => None,
        }
    }

    fn expect_int(&mut self, what: &str) -> PResult<Spanned<i64>> {
        let span = self.span();
        let word = self.expect_word(what)?;
        word.value
            .parse::<i64>()
            .map(|n| Spanned::new(n, word.span))
            .map_err(|_| {
                self.error_at(
                    DiagCode::Parse,
                    span,
                    format!("expected {what}, found `{}`", word.value),
                )
            })
    }

    fn expect_number(&mut self, what: &str) -> PResult<Spanned<f64>> {
        let word = self.expect_word(what)?;
        match word.value.parse::<f64>() {
            Ok(n) if n.is_finite() => Ok(Spanned::new(n, word.span)),
            _ => Err(self.error_at(
                DiagCode::Parse,
                word.span,
                format!("expected {what}, found `{}`", word.value),
            )),
        }
    }

    pub fn expect_at(&mut self) -> PResult<()> {
        if self.peek().kind == TokenKind::At {
            self.bump();
            Ok(())
        } else {
            Err(self.expected("`@`"))
        }
    }

    pub fn expect_level(&mut self) -> PResult<BloomLevel> {
        match self.peek().kind.clone() {
            TokenKind::Word(w) => {
                let span = self.bump().span(self.file);
                w.parse::<BloomLevel>()
                    .map_err(|e| self.error_at(DiagCode::BadBloom, span, e.to_string()))
            }
            _ => Err(self.expected("a Bloom level (A1, A2, B1, B2, C1, C2)")),
        }
    }

    pub fn expect_outcome_ref(&mut self) -> PResult<Spanned<OutcomeRef>> {
        let word = self.expect_word("an outcome reference <course>/<outcome>")?;
        match word.value.parse::<OutcomeRef>() {
            Ok(r) => Ok(Spanned::new(r, word.span)),
            Err(msg) => Err(self.error_at(DiagCode::Parse, word.span, msg)),
        }
    }

    /// `<topic> @ <level>`, spanning from the topic to the level.
    pub fn topic_at_level(&mut self) -> PResult<Spanned<TopicRequirement>> {
        let topic = self.expect_word("a topic id")?;
        self.expect_at()?;
        let level = self.expect_level()?;
        let span = topic.span.to(&self.tokens[self.pos - 1].span(self.file));
        Ok(Spanned::new(
            TopicRequirement::new(topic.value, level),
            span,
        ))
    }

    fn expect_lbrace(&mut self) -> PResult<()> {
        if self.peek().kind == TokenKind::LBrace {
            self.bump();
            Ok(())
        } else {
            Err(self.expected("`{`"))
        }
    }

    /// Parses `{ item* }`, dispatching each keyword-led item to `item`.
    /// Unknown keywords are warned about and skipped; items that fail are
    /// skipped up to the next item.
    fn items(
        &mut self,
        known: &[&str],
        mut item: impl FnMut(&mut Self, &str, SourceSpan) -> PResult<()>,
    ) -> PResult<SourceSpan> {
        self.expect_lbrace()?;
        let base = self.depth;
        loop {
            match self.peek().kind.clone() {
                TokenKind::RBrace => return Ok(self.bump().span(self.file)),
                TokenKind::Eof => {
                    let span = self.span();
                    self.error_at(DiagCode::Parse, span, "unexpected end of file, missing `}`");
                    return Err(Reported);
                }
                TokenKind::Word(w) if known.contains(&w.as_str()) => {
                    let span = self.bump().span(self.file);
                    if item(self, &w, span).is_err() {
                        self.skip_item(base, known);
                    }
                }
                TokenKind::Word(w) => {
                    let span = self.span();
                    self.diags.push(Diagnostic::warning(
                        DiagCode::UnknownAttr,
                        span,
                        format!("unknown attribute `{w}` ignored"),
                    ));
                    self.bump();
                    self.skip_item(base, known);
                }
                _ => {
                    self.expected("an attribute keyword or `}`");
                    self.bump();
                    self.skip_item(base, known);
                }
            }
        }
    }

    fn skip_item(&mut self, base: i32, known: &[&str]) {
        loop {
            if self.at_eof() || self.depth < base {
                return;
            }
            if self.depth == base {
                match &self.peek().kind {
                    TokenKind::RBrace => return,
                    TokenKind::Word(w) if known.contains(&w.as_str()) => return,
                    _ => {}
                }
            }
            self.bump();
        }
    }

    fn skip_to_top_level(&mut self) {
        self.skip_to_keyword(TOP_LEVEL);
    }

    fn skip_to_keyword(&mut self, keywords: &[&str]) {
        loop {
            if self.at_eof() {
                return;
            }
            if self.depth <= 0 {
                self.depth = 0;
                if let Some(w) = self.peek_word() {
                    if keywords.contains(&w) {
                        return;
                    }
                }
            }
            self.bump();
        }
    }

    fn skill_ref(&mut self) -> PResult<Spanned<String>> {
        let id = self.expect_word("a skill id")?;
        self.reject_level_suffix("skill")?;
        Ok(id)
    }

    fn disposition_ref(&mut self) -> PResult<Spanned<String>> {
        let id = self.expect_word("a disposition id")?;
        self.reject_level_suffix("disposition")?;
        Ok(id)
    }

    /// `@` after a skill or disposition is reserved syntax.
    fn reject_level_suffix(&mut self, what: &str) -> PResult<()> {
        if self.peek().kind == TokenKind::At {
            let start = self.bump().span(self.file);
            let mut span = start.clone();
            if self.peek_word().is_some() {
                span = start.to(&self.bump().span(self.file));
            }
            self.error_at(
                DiagCode::SkillLevel,
                span,
                format!("{what} requirements carry no proficiency level; `@` is reserved"),
            );
            return Err(Reported);
        }
        Ok(())
    }

    pub fn parse_file(&mut self) -> Draft {
        let mut draft = Draft::default();
        while !self.at_eof() {
            let ok = match self.peek_word() {
                Some("catalog") => self.catalog().map(|c| draft.catalogs.push(c)),
                Some("block") => self.block().map(|b| draft.blocks.push(b)),
                Some("competency") => self.competency().map(|c| draft.competencies.push(c)),
                Some("course") => self.course().map(|c| draft.courses.push(c)),
                Some("path") => self.path().map(|p| draft.paths.push(p)),
                Some("object") => self.object().map(|o| draft.objects.push(o)),
                Some("pathway") => self.pathway().map(|p| draft.pathways.push(p)),
                Some("portfolio") => self.portfolio().map(|p| draft.portfolios.push(p)),
                Some("meta") => self.meta().map(|m| draft.meta.push(m)),
                _ => {
                    self.expected("a declaration (catalog, block, competency, course, path, object, pathway, portfolio, meta)");
                    self.bump();
                    Err(Reported)
                }
            };
            if ok.is_err() {
                self.skip_to_top_level();
            }
        }
        draft
    }

    /// Parses a what-if fragment: `create`, `add` and `remove` statements.
    pub fn parse_delta(&mut self) -> WhatIfDelta {
        const DELTA: &[&str] = &["create", "add", "remove"];
        let mut delta = WhatIfDelta::default();
        while !self.at_eof() {
            let ok = match self.peek_word() {
                Some("create") => self.delta_create().map(|c| delta.create.push(c)),
                Some("add") => self.delta_edit("add").map(|e| delta.add.push(e)),
                Some("remove") => self.delta_edit("remove").map(|e| delta.remove.push(e)),
                _ => {
                    self.expected("a delta statement (create, add, remove)");
                    self.bump();
                    Err(Reported)
                }
            };
            if ok.is_err() {
                self.skip_to_keyword(DELTA);
            }
        }
        delta
    }

    fn delta_create(&mut self) -> PResult<OutcomeCreation> {
        let start = self.expect_keyword("create")?;
        let r = self.expect_outcome_ref()?;
        let statement = self.opt_str().unwrap_or_default();
        let span = start.to(&self.tokens[self.pos - 1].span(self.file));
        Ok(OutcomeCreation {
            course: r.value.course,
            outcome: r.value.outcome,
            statement,
            span: Some(span),
        })
    }

    fn delta_edit(&mut self, kw: &str) -> PResult<TargetEdit> {
        let start = self.expect_keyword(kw)?;
        let r = self.expect_outcome_ref()?;
        let t = self.topic_at_level()?;
        Ok(TargetEdit {
            course: r.value.course,
            outcome: r.value.outcome,
            topic: t.value.topic,
            level: t.value.level,
            span: Some(start.to(&t.span)),
        })
    }

    fn catalog(&mut self) -> PResult<RawCatalog> {
        let start = self.expect_keyword("catalog")?;
        let name = self.expect_str("a catalog name string")?;
        let version = if self.at_word("version") {
            self.bump();
            self.expect_str("a version string")?
        } else {
            String::new()
        };
        let mut areas = Vec::new();
        let mut skills = Vec::new();
        let mut dispositions = Vec::new();
        let end = self.items(&["area", "skill", "disposition"], |p, kw, kw_span| {
            match kw {
                "area" => areas.push(p.area(kw_span)?),
                "skill" => skills.push(p.named_decl("a skill id", kw_span)?),
                _ => dispositions.push(p.named_decl("a disposition id", kw_span)?),
            }
            Ok(())
        })?;
        Ok(RawCatalog {
            name,
            version,
            areas,
            skills,
            dispositions,
            span: start.to(&end),
        })
    }

    fn named_decl(&mut self, what: &str, start: SourceSpan) -> PResult<RawNamed> {
        let id = self.expect_word(what)?;
        let title = self.expect_str("a title string")?;
        let end = self.tokens[self.pos - 1].span(self.file);
        Ok(RawNamed {
            id: id.value,
            title,
            span: start.to(&end),
        })
    }

    fn area(&mut self, start: SourceSpan) -> PResult<RawArea> {
        let id = self.expect_word("an area id")?;
        let title = self.expect_str("an area title string")?;
        let category = if self.at_word("category") {
            self.bump();
            Some(self.expect_str("a category string")?)
        } else {
            None
        };
        let mut topics = Vec::new();
        let area_id = id.value.clone();
        let end = self.items(&["topic"], |p, _, kw_span| {
            let mut t = p.named_decl("a topic id", kw_span)?;
            t.id = format!("{area_id}/{}", t.id);
            topics.push(t);
            Ok(())
        })?;
        Ok(RawArea {
            id: id.value,
            title,
            category,
            topics,
            span: start.to(&end),
        })
    }

    fn block(&mut self) -> PResult<RawBlock> {
        let start = self.expect_keyword("block")?;
        let id = self.expect_int("a block number")?;
        let title = self.expect_str("a block title string")?;
        let end = self.tokens[self.pos - 1].span(self.file);
        Ok(RawBlock {
            id: id.value,
            title,
            span: start.to(&end),
        })
    }

    fn competency(&mut self) -> PResult<RawCompetency> {
        let start = self.expect_keyword("competency")?;
        let id = self.expect_id("a competency id")?;
        self.expect_keyword("in")?;
        self.expect_keyword("block")?;
        let block = self.expect_int("a block number")?;
        let statement = self.opt_str().unwrap_or_default();
        let mut reqs = Vec::new();
        let mut skills = Vec::new();
        let mut dispositions = Vec::new();
        let end = self.items(&["requires", "skill", "disposition"], |p, kw, _| {
            match kw {
                "requires" => reqs.push(p.topic_at_level()?),
                "skill" => skills.push(p.skill_ref()?),
                _ => dispositions.push(p.disposition_ref()?),
            }
            Ok(())
        })?;
        Ok(RawCompetency {
            id: id.value,
            block,
            statement,
            reqs,
            skills,
            dispositions,
            span: start.to(&end),
        })
    }

    fn course(&mut self) -> PResult<RawCourse> {
        let start = self.expect_keyword("course")?;
        let id = self.expect_word("a course id")?;
        let title = self.expect_str("a course title string")?;
        let mut year = None;
        let mut ects = None;
        let mut outcomes = Vec::new();
        let mut paths = Vec::new();
        let end = self.items(&["year", "ects", "outcome", "path"], |p, kw, kw_span| {
            match kw {
                "year" => year = Some(p.expect_int("a year number")?),
                "ects" => ects = Some(p.expect_number("an ECTS value")?),
                "outcome" => outcomes.push(p.outcome(kw_span)?),
                _ => paths.push(p.expect_word("a path id")?),
            }
            Ok(())
        })?;
        Ok(RawCourse {
            id: id.value,
            title,
            year,
            ects,
            outcomes,
            paths,
            span: start.to(&end),
        })
    }

    fn outcome(&mut self, start: SourceSpan) -> PResult<RawOutcome> {
        let id = self.expect_word("an outcome id")?;
        let statement = self.opt_str().unwrap_or_default();
        let mut targets = Vec::new();
        let mut skills = Vec::new();
        let mut dispositions = Vec::new();
        let end = self.items(&["targets", "skill", "disposition"], |p, kw, _| {
            match kw {
                "targets" => targets.push(p.topic_at_level()?),
                "skill" => skills.push(p.skill_ref()?),
                _ => dispositions.push(p.disposition_ref()?),
            }
            Ok(())
        })?;
        Ok(RawOutcome {
            id: id.value,
            statement,
            targets,
            skills,
            dispositions,
            span: start.to(&end),
        })
    }

    fn path(&mut self) -> PResult<RawPath> {
        let start = self.expect_keyword("path")?;
        let id = self.expect_word("a path id")?;
        let mut stages = Vec::new();
        let end = self.items(&["stage"], |p, _, kw_span| {
            let mut objects = Vec::new();
            let end = p.items(&["object"], |p, _, _| {
                objects.push(p.expect_word("a learning object id")?);
                Ok(())
            })?;
            stages.push(Spanned::new(objects, kw_span.to(&end)));
            Ok(())
        })?;
        Ok(RawPath {
            id: id.value,
            stages,
            span: start.to(&end),
        })
    }

    fn object(&mut self) -> PResult<RawObject> {
        let start = self.expect_keyword("object")?;
        let id = self.expect_word("a learning object id")?;
        let title = self.opt_str().unwrap_or_default();
        let mut content = None;
        let mut assessments = Vec::new();
        let end = self.items(&["content", "assessment"], |p, kw, kw_span| {
            match kw {
                "content" => content = Some(p.expect_str("a content reference string")?),
                _ => assessments.push(p.assessment(kw_span)?),
            }
            Ok(())
        })?;
        Ok(RawObject {
            id: id.value,
            title,
            content,
            assessments,
            span: start.to(&end),
        })
    }

    fn assessment(&mut self, start: SourceSpan) -> PResult<RawAssessment> {
        let kind_word =
            self.expect_word("an assessment kind (diagnostic, formative, summative)")?;
        let kind = kind_word.value.parse::<AssessmentKind>().map_err(|_| {
            self.error_at(
                DiagCode::Parse,
                kind_word.span.clone(),
                format!(
                    "`{}` is not an assessment kind (expected diagnostic, formative or summative)",
                    kind_word.value
                ),
            )
        })?;
        let id = self.expect_word("an assessment id")?;
        let mut outcomes = Vec::new();
        let end = self.items(&["outcome"], |p, _, _| {
            outcomes.push(p.expect_outcome_ref()?);
            Ok(())
        })?;
        Ok(RawAssessment {
            id: id.value,
            kind,
            outcomes,
            span: start.to(&end),
        })
    }

    fn pathway(&mut self) -> PResult<RawPathway> {
        let start = self.expect_keyword("pathway")?;
        let id = self.expect_word("a pathway id")?;
        let title = self.opt_str().unwrap_or_default();
        let mut emphasizes = Vec::new();
        let end = self.items(&["emphasizes"], |p, _, _| {
            emphasizes.push(p.expect_int("a block number")?);
            while p.peek_word().is_some_and(|w| w.parse::<i64>().is_ok()) {
                emphasizes.push(p.expect_int("a block number")?);
            }
            Ok(())
        })?;
        Ok(RawPathway {
            id: id.value,
            title,
            emphasizes,
            span: start.to(&end),
        })
    }

    fn portfolio(&mut self) -> PResult<RawPortfolio> {
        let start = self.expect_keyword("portfolio")?;
        let student = self.expect_word("a student id")?;
        let mut records = Vec::new();
        let end = self.items(&["achievement"], |p, _, kw_span| {
            records.push(p.achievement(kw_span)?);
            Ok(())
        })?;
        Ok(RawPortfolio {
            student: student.value,
            records,
            span: start.to(&end),
        })
    }

    fn achievement(&mut self, start: SourceSpan) -> PResult<RawRecord> {
        let id = self.expect_word("an achievement id")?;
        let title = self.opt_str().unwrap_or_default();
        let mut revisions = None;
        let mut created = None;
        let mut links = Vec::new();
        let end = self.items(
            &["created", "revisions", "competency", "outcome"],
            |p, kw, kw_span| {
                match kw {
                    "created" => {
                        let span = p.span();
                        created =
                            Some(Spanned::new(p.expect_str("an ISO-8601 date string")?, span));
                    }
                    "revisions" => revisions = Some(p.expect_int("a revision count")?),
                    "competency" => {
                        let id = p.expect_id("a competency id")?;
                        p.expect_at()?;
                        let level = p.expect_level()?;
                        let span = kw_span.to(&p.tokens[p.pos - 1].span(p.file));
                        links.push(Spanned::new(
                            LinkedSpec {
                                target: SpecRef::Competency(id.value),
                                level,
                            },
                            span,
                        ));
                    }
                    _ => {
                        let r = p.expect_outcome_ref()?;
                        p.expect_at()?;
                        let level = p.expect_level()?;
                        let span = kw_span.to(&p.tokens[p.pos - 1].span(p.file));
                        links.push(Spanned::new(
                            LinkedSpec {
                                target: SpecRef::Outcome(r.value),
                                level,
                            },
                            span,
                        ));
                    }
                }
                Ok(())
            },
        )?;
        Ok(RawRecord {
            id: id.value,
            title,
            revisions,
            created,
            links,
            span: start.to(&end),
        })
    }

    fn meta(&mut self) -> PResult<RawMeta> {
        let start = self.expect_keyword("meta")?;
        let key = self.expect_str("a meta key string")?;
        let value = self.expect_str("a meta value string")?;
        let end = self.tokens[self.pos - 1].span(self.file);
        Ok(RawMeta {
            key,
            value,
            span: start.to(&end),
        })
    }
}

/// Reports top-level declarations that reuse an id already declared
/// earlier (in file-name order, then position).
pub(crate) fn check_duplicate_declarations(draft: &Draft, diags: &mut Vec<Diagnostic>) {
    fn dups<'d, T>(
        items: &'d [T],
        kind: &str,
        key: impl Fn(&T) -> String,
        span: impl Fn(&'d T) -> &'d SourceSpan,
        diags: &mut Vec<Diagnostic>,
    ) {
        let mut seen: HashMap<String, &SourceSpan> = HashMap::new();
        for item in items {
            let k = key(item);
            let s = span(item);
            if let Some(first) = seen.get(&k) {
                diags.push(Diagnostic::error(
                    DiagCode::DupId,
                    s.clone(),
                    format!("{kind} `{k}` is already declared at {first}"),
                ));
            } else {
                seen.insert(k, s);
            }
        }
    }
    dups(
        &draft.catalogs,
        "catalog",
        |c| c.name.clone(),
        |c| &c.span,
        diags,
    );
    dups(
        &draft.blocks,
        "block",
        |b| b.id.to_string(),
        |b| &b.span,
        diags,
    );
    dups(
        &draft.competencies,
        "competency",
        |c| c.id.clone(),
        |c| &c.span,
        diags,
    );
    dups(
        &draft.courses,
        "course",
        |c| c.id.clone(),
        |c| &c.span,
        diags,
    );
    dups(&draft.paths, "path", |p| p.id.clone(), |p| &p.span, diags);
    dups(
        &draft.objects,
        "learning object",
        |o| o.id.clone(),
        |o| &o.span,
        diags,
    );
    dups(
        &draft.pathways,
        "pathway",
        |p| p.id.clone(),
        |p| &p.span,
        diags,
    );
    dups(
        &draft.portfolios,
        "portfolio",
        |p| p.student.clone(),
        |p| &p.span,
        diags,
    );
    dups(
        &draft.meta,
        "meta key",
        |m| m.key.clone(),
        |m| &m.span,
        diags,
    );
}
