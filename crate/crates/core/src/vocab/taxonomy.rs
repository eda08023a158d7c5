// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ridesharing-booking event taxonomy as a SKOS concept scheme.

use crate::ns::{self, owl, rbe, skos};
use crate::rdf::{Graph, Iri, Literal};

/// First-level event families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventFamily {
    Started,
    Completed,
    Cancelled,
    Delayed,
    NoShow,
}

/// `(local name, broader local name, label)`.
pub(super) const CONCEPTS: &[(&str, Option<&str>, &str)] = &[
    ("RidesharingStarted", None, "ridesharing started"),
    ("RidesharingCompleted", None, "ridesharing completed"),
    ("RidesharingCancelled", None, "ridesharing cancelled"),
    ("RidesharingDelayed", None, "ridesharing delayed"),
    ("RidesharingNoShow", None, "ridesharing no-show"),
    (
        "RidesharingCancelledByDriver",
        Some("RidesharingCancelled"),
        "ridesharing cancelled by driver",
    ),
    (
        "RidesharingCancelledByPassenger",
        Some("RidesharingCancelled"),
        "ridesharing cancelled by passenger",
    ),
    (
        "RidesharingDelayedByDriver",
        Some("RidesharingDelayed"),
        "ridesharing delayed by driver",
    ),
    (
        "RidesharingDelayedByPassenger",
        Some("RidesharingDelayed"),
        "ridesharing delayed by passenger",
    ),
    (
        "RidesharingNoShowDriver",
        Some("RidesharingNoShow"),
        "driver no-show",
    ),
    (
        "RidesharingNoShowPassenger",
        Some("RidesharingNoShow"),
        "passenger no-show",
    ),
];

/// The concept scheme IRI is the `rbe:` namespace itself.
pub fn event_scheme() -> Iri {
    Iri::new(ns::RBE).expect("constant")
}

/// Every event concept, top concepts first.
pub fn event_concepts() -> Vec<Iri> {
    CONCEPTS.iter().map(|(local, _, _)| rbe(local)).collect()
}

pub fn top_concepts() -> Vec<Iri> {
    CONCEPTS
        .iter()
        .filter(|(_, parent, _)| parent.is_none())
        .map(|(local, _, _)| rbe(local))
        .collect()
}

fn local_of(concept: &Iri) -> Option<&str> {
    concept.as_str().strip_prefix(ns::RBE)
}

pub fn is_event_concept(concept: &Iri) -> bool {
    local_of(concept).is_some_and(|l| CONCEPTS.iter().any(|(c, _, _)| *c == l))
}

/// The `skos:broader` parent, if any.
pub fn broader(concept: &Iri) -> Option<Iri> {
    let local = local_of(concept)?;
    CONCEPTS
        .iter()
        .find(|(c, _, _)| *c == local)
        .and_then(|(_, parent, _)| parent.map(rbe))
}

/// `concept` equals `ancestor` or sits below it.
pub fn is_narrower_or_equal(concept: &Iri, ancestor: &Iri) -> bool {
    let mut cur = Some(concept.clone());
    while let Some(c) = cur {
        if &c == ancestor {
            return true;
        }
        cur = broader(&c);
    }
    false
}

pub fn event_family(concept: &Iri) -> Option<EventFamily> {
    let top = {
        let mut c = concept.clone();
        if !is_event_concept(&c) {
            return None;
        }
        while let Some(parent) = broader(&c) {
            c = parent;
        }
        c
    };
    Some(match local_of(&top)? {
        "RidesharingStarted" => EventFamily::Started,
        "RidesharingCompleted" => EventFamily::Completed,
        "RidesharingCancelled" => EventFamily::Cancelled,
        "RidesharingDelayed" => EventFamily::Delayed,
        "RidesharingNoShow" => EventFamily::NoShow,
        _ => return None,
    })
}

pub fn build_event_taxonomy() -> Graph {
    let mut g = Graph::with_default_prefixes();
    let scheme = event_scheme();
    g.put_type(&scheme, &skos("ConceptScheme"));
    g.put_type(&scheme, &owl("Ontology"));
    g.put_literal(
        &scheme,
        &skos("prefLabel"),
        Literal::lang("ridesharing booking events", "en").expect("static tag"),
    );
    g.put(
        &scheme,
        &ns::dcterms("license"),
        Iri::new(ns::CC_BY_4).expect("constant"),
    );
    for (local, parent, label) in CONCEPTS {
        let c = rbe(local);
        g.put_type(&c, &skos("Concept"));
        g.put_literal(
            &c,
            &skos("prefLabel"),
            Literal::lang(*label, "en").expect("static tag"),
        );
        g.put(&c, &skos("inScheme"), scheme.clone());
        match parent {
            None => {
                g.put(&c, &skos("topConceptOf"), scheme.clone());
                g.put(&scheme, &skos("hasTopConcept"), c.clone());
            }
            Some(parent) => {
                g.put(&c, &skos("broader"), rbe(parent));
                g.put(&rbe(parent), &skos("narrower"), c.clone());
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Term;

    #[test]
    fn five_top_concepts() {
        let g = build_event_taxonomy();
        let tops = g.triples_matching(
            None,
            Some(&skos("topConceptOf")),
            Some(&event_scheme().into()),
        );
        assert_eq!(tops.len(), 5);
        assert_eq!(top_concepts().len(), 5);
    }

    #[test]
    fn second_level_broader() {
        let g = build_event_taxonomy();
        assert!(g.has(
            &rbe("RidesharingCancelledByDriver"),
            &skos("broader"),
            &rbe("RidesharingCancelled").into()
        ));
        assert_eq!(
            broader(&rbe("RidesharingNoShowDriver")),
            Some(rbe("RidesharingNoShow"))
        );
        assert!(is_narrower_or_equal(
            &rbe("RidesharingDelayedByPassenger"),
            &rbe("RidesharingDelayed")
        ));
        assert!(!is_narrower_or_equal(
            &rbe("RidesharingDelayed"),
            &rbe("RidesharingDelayedByPassenger")
        ));
    }

    #[test]
    fn every_concept_in_scheme() {
        let g = build_event_taxonomy();
        let scheme: Term = event_scheme().into();
        for c in event_concepts() {
            assert!(g.has(&c, &skos("inScheme"), &scheme), "{c}");
        }
    }

    #[test]
    fn families() {
        assert_eq!(
            event_family(&rbe("RidesharingNoShowPassenger")),
            Some(EventFamily::NoShow)
        );
        assert_eq!(
            event_family(&rbe("RidesharingStarted")),
            Some(EventFamily::Started)
        );
        assert_eq!(event_family(&rbe("Unknown")), None);
        assert_eq!(event_family(&ns::r2r("Ride")), None);
    }
}
