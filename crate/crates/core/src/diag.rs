//! Source spans and diagnostics shared by the parser, the validator and the
//! analyses.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A region of a source file. Lines and columns are 1-based; `col_end` is
/// one past the last character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: String,
    pub line_start: u32,
    pub col_start: u32,
    pub line_end: u32,
    pub col_end: u32,
}

impl SourceSpan {
    pub fn new(
        file: impl Into<String>,
        line_start: u32,
        col_start: u32,
        line_end: u32,
        col_end: u32,
    ) -> Self {
        SourceSpan {
            file: file.into(),
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    /// Span for data that did not come from a text source.
    pub fn synthetic(file: impl Into<String>) -> Self {
        SourceSpan::new(file, 1, 1, 1, 1)
    }

    /// Smallest span covering both `self` and `other` (same file assumed).
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            line_start: self.line_start,
            col_start: self.col_start,
            line_end: other.line_end,
            col_end: other.col_end,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line_start, self.col_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// The registry of stable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiagCode {
    #[serde(rename = "E_PARSE")]
    Parse,
    #[serde(rename = "E_BAD_BLOOM")]
    BadBloom,
    #[serde(rename = "E_DUP_ID")]
    DupId,
    #[serde(rename = "E_DANGLING_REF")]
    DanglingRef,
    #[serde(rename = "E_EMPTY_REQS")]
    EmptyReqs,
    #[serde(rename = "E_DUP_TOPIC")]
    DupTopic,
    #[serde(rename = "E_EMPTY")]
    Empty,
    #[serde(rename = "E_BLOCK_MISMATCH")]
    BlockMismatch,
    #[serde(rename = "E_RANGE")]
    Range,
    #[serde(rename = "E_MISSING_FIELD")]
    MissingField,
    #[serde(rename = "E_SKILL_LEVEL")]
    SkillLevel,
    #[serde(rename = "E_IO")]
    Io,
    #[serde(rename = "E_UNKNOWN_ID")]
    UnknownId,
    #[serde(rename = "E_DELTA_UNRESOLVED")]
    DeltaUnresolved,
    #[serde(rename = "E_EMPTY_COHORT")]
    EmptyCohort,
    #[serde(rename = "E_JSON")]
    Json,
    #[serde(rename = "W_UNKNOWN_ATTR")]
    UnknownAttr,
    #[serde(rename = "W_EMPHASIS_UNDERSERVED")]
    EmphasisUnderserved,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Parse => "E_PARSE",
            DiagCode::BadBloom => "E_BAD_BLOOM",
            DiagCode::DupId => "E_DUP_ID",
            DiagCode::DanglingRef => "E_DANGLING_REF",
            DiagCode::EmptyReqs => "E_EMPTY_REQS",
            DiagCode::DupTopic => "E_DUP_TOPIC",
            DiagCode::Empty => "E_EMPTY",
            DiagCode::BlockMismatch => "E_BLOCK_MISMATCH",
            DiagCode::Range => "E_RANGE",
            DiagCode::MissingField => "E_MISSING_FIELD",
            DiagCode::SkillLevel => "E_SKILL_LEVEL",
            DiagCode::Io => "E_IO",
            DiagCode::UnknownId => "E_UNKNOWN_ID",
            DiagCode::DeltaUnresolved => "E_DELTA_UNRESOLVED",
            DiagCode::EmptyCohort => "E_EMPTY_COHORT",
            DiagCode::Json => "E_JSON",
            DiagCode::UnknownAttr => "W_UNKNOWN_ATTR",
            DiagCode::EmphasisUnderserved => "W_EMPHASIS_UNDERSERVED",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(code: DiagCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn warning(code: DiagCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}[{}]: {}", self.span, self.code, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// Named UTF-8 texts, ordered by name. Also used for exported file sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceSet {
    files: Vec<(String, String)>,
}

impl SourceSet {
    pub fn new() -> Self {
        SourceSet::default()
    }

    /// Adds a file, replacing any previous file of the same name.
    pub fn insert(&mut self, name: impl Into<String>, text: impl Into<String>) {
        let name = name.into();
        let text = text.into();
        match self.files.binary_search_by(|(n, _)| n.as_str().cmp(&name)) {
            Ok(i) => self.files[i].1 = text,
            Err(i) => self.files.insert(i, (name, text)),
        }
    }

    pub fn with(mut self, name: impl Into<String>, text: impl Into<String>) -> Self {
        self.insert(name, text);
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files
            .binary_search_by(|(n, _)| n.as_str().cmp(name))
            .ok()
            .map(|i| self.files[i].1.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.files.iter().map(|(n, t)| (n.as_str(), t.as_str()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }
}

impl<N: Into<String>, T: Into<String>> FromIterator<(N, T)> for SourceSet {
    fn from_iter<I: IntoIterator<Item = (N, T)>>(iter: I) -> Self {
        let mut set = SourceSet::new();
        for (n, t) in iter {
            set.insert(n, t);
        }
        set
    }
}

/// Orders diagnostics by position, then code.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| (&a.span, a.code, &a.message).cmp(&(&b.span, b.code, &b.message)));
}
