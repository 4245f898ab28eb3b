#![forbid(unsafe_code)]

//! Textual UML toolchain.
//!
//! A `.uml` document holds use-case diagrams (actors, use cases, links) and
//! class diagrams (classes, inheritance, `uses` relations). The pipeline:
//!
//! 1. [`parser::parse_document`] — source text to [`syntax::SyntaxTree`],
//!    with recovery and positioned diagnostics.
//! 2. [`model::resolve`] — name resolution into an immutable [`model::Model`]
//!    with inheritance, traceability, and call-obligation queries.
//! 3. [`validate::validate`] — the consistency rules; errors block
//!    generation, warnings do not.
//! 4. [`codegen::map_model`] / [`codegen::emit_canonical`] — declaration-only
//!    class skeletons in a fixed text format.
//!
//! The `umlmap` binary wires these behind `parse`, `validate`, `trace`, and
//! `generate` subcommands; see [`cli`] for the exit-code contract.

pub mod cli;
pub mod codegen;
pub mod diag;
pub mod lexer;
pub mod model;
pub mod parser;
pub mod printer;
pub mod syntax;
pub mod validate;

pub use diag::{Code, Diagnostic, Severity, SourceSpan};
pub use model::{resolve, Model};
pub use parser::parse_document;
pub use printer::print_canonical;
pub use validate::{validate, Violation};
