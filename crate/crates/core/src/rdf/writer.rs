// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic Turtle output.
//!
//! Layout: `@prefix` lines sorted by prefix, a blank line, then one block per
//! subject. Subjects, predicates and objects follow N-Triples order; repeated
//! predicates are folded with `;` and repeated objects with `,`.

use std::fmt::Write;

use super::term::escape_string;
use super::{Graph, Iri, Literal, Term};
use crate::ns;

const INDENT: &str = "    ";

pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, namespace) in graph.prefixes() {
        let _ = writeln!(out, "@prefix {prefix}: <{namespace}> .");
    }

    let mut current_subject: Option<&Term> = None;
    let mut current_predicate: Option<&Iri> = None;
    for triple in graph.iter() {
        if current_subject != Some(triple.subject()) {
            if current_subject.is_some() {
                out.push_str(" .\n");
            }
            if current_subject.is_some() || !graph.prefixes().is_empty() {
                out.push('\n');
            }
            let _ = write!(
                out,
                "{} {} {}",
                render_term(graph, triple.subject()),
                render_predicate(graph, triple.predicate()),
                render_term(graph, triple.object())
            );
            current_subject = Some(triple.subject());
            current_predicate = Some(triple.predicate());
        } else if current_predicate != Some(triple.predicate()) {
            let _ = write!(
                out,
                " ;\n{INDENT}{} {}",
                render_predicate(graph, triple.predicate()),
                render_term(graph, triple.object())
            );
            current_predicate = Some(triple.predicate());
        } else {
            let _ = write!(out, ", {}", render_term(graph, triple.object()));
        }
    }
    if current_subject.is_some() {
        out.push_str(" .\n");
    }
    out
}

fn render_predicate(graph: &Graph, p: &Iri) -> String {
    if p.as_str() == "http://www.w3.org/1999/02/22-rdf-syntax-ns#type" {
        "a".to_string()
    } else {
        render_iri(graph, p)
    }
}

fn render_term(graph: &Graph, term: &Term) -> String {
    match term {
        Term::Iri(iri) => render_iri(graph, iri),
        Term::Blank(b) => format!("_:{}", b.label()),
        Term::Literal(lit) => render_literal(graph, lit),
    }
}

fn render_literal(graph: &Graph, lit: &Literal) -> String {
    let quoted = format!("\"{}\"", escape_string(lit.lexical()));
    if let Some(lang) = lit.language() {
        format!("{quoted}@{lang}")
    } else if lit.datatype() == &ns::xsd("string") {
        quoted
    } else {
        format!("{quoted}^^{}", render_iri(graph, lit.datatype()))
    }
}

/// Compacts against the longest matching namespace whose remainder is a
/// valid local name; falls back to `<iri>`.
pub(crate) fn render_iri(graph: &Graph, iri: &Iri) -> String {
    graph
        .prefixes()
        .iter()
        .filter(|(_, namespace)| iri.as_str().starts_with(namespace.as_str()))
        .filter(|(_, namespace)| is_local_name(&iri.as_str()[namespace.len()..]))
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)))
        .map(|(prefix, namespace)| format!("{prefix}:{}", &iri.as_str()[namespace.len()..]))
        .unwrap_or_else(|| iri.to_string())
}

/// The local-name subset both the writer and the parser agree on.
pub(crate) fn is_local_name(local: &str) -> bool {
    let Some(first) = local.chars().next() else {
        return true;
    };
    if first == '-' || first == '.' || local.ends_with('.') {
        return false;
    }
    local
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}
