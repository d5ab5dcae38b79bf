use std::path::PathBuf;

use crate::diag::{DiagCode, Diagnostic, SourceSpan};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("what-if delta does not resolve against the model ({} problem(s))", .0.len())]
    DeltaUnresolved(Vec<Diagnostic>),

    #[error("cohort has no achievement pages; mean specs per page is undefined")]
    EmptyCohort,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("model has {} error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Invalid(Vec<Diagnostic>),
}

impl Error {
    pub fn unknown(kind: &'static str, id: impl Into<String>) -> Self {
        Error::UnknownId {
            kind,
            id: id.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn code(&self) -> DiagCode {
        match self {
            Error::UnknownId { .. } => DiagCode::UnknownId,
            Error::DeltaUnresolved(_) => DiagCode::DeltaUnresolved,
            Error::EmptyCohort => DiagCode::EmptyCohort,
            Error::Io { .. } => DiagCode::Io,
            Error::Invalid(diags) => diags
                .iter()
                .find(|d| d.is_error())
                .map(|d| d.code)
                .unwrap_or(DiagCode::Parse),
        }
    }

    /// The error as a list of diagnostics, for uniform reporting.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            Error::DeltaUnresolved(d) | Error::Invalid(d) => d.clone(),
            Error::Io { path, .. } => vec![Diagnostic::error(
                DiagCode::Io,
                SourceSpan::synthetic(path.display().to_string()),
                self.to_string(),
            )],
            _ => vec![Diagnostic::error(
                self.code(),
                SourceSpan::synthetic("<query>"),
                self.to_string(),
            )],
        }
    }
}
