// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! The agreements T-Box, the booking-event taxonomy and a light validator.

mod taxonomy;
mod tbox;
mod validate;

use std::sync::LazyLock;

pub use taxonomy::{
    broader, build_event_taxonomy, event_concepts, event_family, event_scheme, is_event_concept,
    is_narrower_or_equal, top_concepts, EventFamily,
};
pub use tbox::{build_agreement_declarations, build_oasis_declarations, build_tbox};
pub use validate::{validate, ClassHierarchy, Finding, FindingCode, Severity, ValidationReport};

use crate::ns;
use crate::rdf::{Graph, Iri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    OntologyClass,
    ObjectProperty,
    DataProperty,
    Individual,
    SkosConcept,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabTerm {
    pub curie: String,
    pub iri: Iri,
    pub kind: TermKind,
}

impl VocabTerm {
    fn new(curie: &str, kind: TermKind) -> Self {
        VocabTerm {
            curie: curie.to_string(),
            iri: ns::expand(curie).expect("known prefix"),
            kind,
        }
    }
}

/// Every term the two vocabulary documents declare.
pub fn vocab_terms() -> Vec<VocabTerm> {
    let mut out = tbox::tbox_terms();
    for concept in event_concepts() {
        out.push(VocabTerm {
            curie: ns::curie(&concept),
            iri: concept,
            kind: TermKind::SkosConcept,
        });
    }
    out
}

/// T-Box, taxonomy, OASIS and `ag:` declarations merged; the schema every
/// exported A-Box is checked against.
pub fn full_schema() -> &'static Graph {
    static SCHEMA: LazyLock<Graph> = LazyLock::new(|| {
        let mut g = build_tbox();
        for part in [
            build_event_taxonomy(),
            build_oasis_declarations(),
            build_agreement_declarations(),
        ] {
            g.extend(&part)
                .expect("all parts use the default prefix table");
        }
        g
    });
    &SCHEMA
}

/// The three published Turtle documents, by file name.
pub fn ontology_documents() -> Vec<(&'static str, Graph)> {
    let mut terms = build_tbox();
    terms
        .extend(&build_oasis_declarations())
        .expect("all parts use the default prefix table");
    let mut agreements = build_agreement_declarations();
    for c in crate::contract::published_contracts() {
        agreements
            .extend(&crate::contract::contract_to_graph(&c))
            .expect("contracts use the default prefix table");
    }
    vec![
        ("terms.ttl", terms),
        ("rb-events.ttl", build_event_taxonomy()),
        ("agreements.ttl", agreements),
    ]
}

pub fn class_hierarchy() -> &'static ClassHierarchy {
    static HIERARCHY: LazyLock<ClassHierarchy> =
        LazyLock::new(|| ClassHierarchy::from_graph(full_schema()));
    &HIERARCHY
}
