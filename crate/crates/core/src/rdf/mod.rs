// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Minimal RDF: terms, triple sets, a Turtle subset, isomorphism.

mod graph;
mod iso;
mod parser;
mod term;
mod writer;

pub use graph::Graph;
pub use iso::{isomorphic, relabel_blanks, MAX_BLANK_NODES};
pub use parser::parse_turtle;
pub use term::{BlankNode, Iri, Literal, Term, Triple};
pub use writer::serialize_turtle;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("prefix '{prefix}' already bound to <{existing}>, cannot rebind to <{requested}>")]
    PrefixConflict {
        prefix: String,
        existing: String,
        requested: String,
    },
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix '{prefix}' at {line}:{column}")]
    UnknownPrefix {
        line: usize,
        column: usize,
        prefix: String,
    },
    #[error("unsupported construct at {line}:{column}: {construct}")]
    Unsupported {
        line: usize,
        column: usize,
        construct: String,
    },
    #[error("isomorphism check over {blank_nodes} blank nodes exceeds the limit of {limit}")]
    Capacity { blank_nodes: usize, limit: usize },
}
