//! Curriculum engineering toolkit: a competency model built from bodies of
//! knowledge, a declarative definition language for it, a traceability
//! graph, and coverage and gap analytics.
//!
//! The usual pipeline is [`io::load`] (or [`dsl::parse`] followed by
//! [`validate::validate`]), then [`graph::Graph::build`], then the analyses
//! in [`coverage`], [`whatif`] and [`portfolio`].

pub mod coverage;
pub mod diag;
pub mod draft;
pub mod dsl;
mod error;
pub mod graph;
pub mod io;
pub mod model;
pub mod portfolio;
pub mod validate;
pub mod whatif;

pub use diag::{DiagCode, Diagnostic, Severity, SourceSet, SourceSpan};
pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{bloom_geq, BloomLevel, Model, ModelDoc};
