//! The group-construction language.
//!
//! ```text
//! expr   := semi { "x" semi }
//! semi   := unit { ":" unit action }
//! unit   := ( atom | "perm" "[" gens "]" | "(" expr ")" ) [ "^" int ]
//! atom   := kind "(" int { "," int } ")"
//! kind   := C | D | Q | QD | S | A | SL | GL | PSL
//! action := "[" clause { ";" clause } "]"
//! clause := "act" [ gen "->" word { "," gen "->" word } ] | "mat" row { row }
//! ```
//!
//! `perm` points are 1-based and generators are separated by `;`. An action
//! block has one clause per generator of the acting group; the generators
//! of the normal part are named `a`, `b`, `c`, … in construction order.

mod ast;
mod manifest;
mod parser;
mod realize;

use thiserror::Error;

use crate::group::GroupError;

pub use ast::{ActionClause, ActionSpec, AtomKind, Construction, Span, Word};
pub use manifest::{parse_manifest, GapId, ManifestEntry, ManifestError};
pub use parser::parse_construction;
pub use realize::{realize_construction, realize_str};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid construction at {}..{}: {message}", span.start, span.end)]
    Semantic { span: Span, message: String },
    #[error("action at {}..{} is not an automorphism action: {detail}", span.start, span.end)]
    ActionNotAutomorphism { span: Span, detail: String },
    #[error("realization too large: {0}")]
    RealizationTooLarge(#[from] GroupError),
}
