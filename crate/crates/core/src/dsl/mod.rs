//! The `.cdsl` competency-definition language: lexer, parser and canonical
//! serializer. The grammar is documented in `docs/grammar.ebnf`.

mod lexer;
pub(crate) mod parser;
mod serialize;

pub use serialize::{serialize, write_str_literal};

use crate::diag::{has_errors, sort_diagnostics, Diagnostic, SourceSet};
use crate::draft::Draft;

/// A successfully parsed source set. `warnings` holds non-fatal diagnostics
/// such as ignored unknown attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub draft: Draft,
    pub warnings: Vec<Diagnostic>,
}

/// Parses every file of `sources` into one draft.
///
/// Files are processed in name order, so the result does not depend on the
/// order in which files were added. References stay unresolved; run
/// [`crate::validate::validate`] on the draft to resolve them.
pub fn parse(sources: &SourceSet) -> Result<Parsed, Vec<Diagnostic>> {
    let mut draft = Draft::default();
    let mut diags = Vec::new();
    for (name, text) in sources.iter() {
        let mut parser = parser::Parser::new(text, name);
        draft.extend(parser.parse_file());
        diags.append(&mut parser.diags);
    }
    parser::check_duplicate_declarations(&draft, &mut diags);
    sort_diagnostics(&mut diags);
    if has_errors(&diags) {
        Err(diags)
    } else {
        Ok(Parsed {
            draft,
            warnings: diags,
        })
    }
}

/// Parses a single text, as when a fragment is supplied inline.
pub fn parse_str(text: &str, file: &str) -> Result<Parsed, Vec<Diagnostic>> {
    parse(&SourceSet::new().with(file, text))
}
