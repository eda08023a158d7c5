// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Namespace constants and the default prefix table.

use crate::rdf::Iri;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";

pub const R2R: &str = "https://w3id.org/ride2rail/terms#";
pub const RBE: &str = "https://w3id.org/ride2rail/rb-events#";
pub const AG: &str = "https://w3id.org/ride2rail/agreements#";
pub const OASIS: &str = "http://www.dmi.unict.it/oasis.owl#";
pub const OSDM: &str = "https://w3id.org/mobility/osdm/core#";
pub const TMORG: &str = "https://w3id.org/mobility/transmodel/organisations#";

/// IRI of the emitted ontology document.
pub const R2R_ONTOLOGY: &str = "https://w3id.org/ride2rail/terms";
pub const CC_BY_4: &str = "https://creativecommons.org/licenses/by/4.0/";

/// Prefixes bound in every graph the library emits, sorted by prefix.
pub const DEFAULT_PREFIXES: &[(&str, &str)] = &[
    ("ag", AG),
    ("dcterms", DCTERMS),
    ("oasis", OASIS),
    ("osdm", OSDM),
    ("owl", OWL),
    ("r2r", R2R),
    ("rbe", RBE),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("skos", SKOS),
    ("tmorg", TMORG),
    ("xsd", XSD),
];

/// Namespaces whose predicates never need a T-Box declaration.
pub const BUILTIN_NAMESPACES: &[&str] = &[RDF, RDFS, OWL, XSD, SKOS, DCTERMS];

fn mint(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("namespace constants are absolute")
}

pub fn rdf(local: &str) -> Iri {
    mint(RDF, local)
}
pub fn rdfs(local: &str) -> Iri {
    mint(RDFS, local)
}
pub fn owl(local: &str) -> Iri {
    mint(OWL, local)
}
pub fn xsd(local: &str) -> Iri {
    mint(XSD, local)
}
pub fn skos(local: &str) -> Iri {
    mint(SKOS, local)
}
pub fn dcterms(local: &str) -> Iri {
    mint(DCTERMS, local)
}
pub fn r2r(local: &str) -> Iri {
    mint(R2R, local)
}
pub fn rbe(local: &str) -> Iri {
    mint(RBE, local)
}
pub fn ag(local: &str) -> Iri {
    mint(AG, local)
}
pub fn oasis(local: &str) -> Iri {
    mint(OASIS, local)
}
pub fn osdm(local: &str) -> Iri {
    mint(OSDM, local)
}
pub fn tmorg(local: &str) -> Iri {
    mint(TMORG, local)
}

pub fn rdf_type() -> Iri {
    rdf("type")
}

/// Expands `prefix:local` against [`DEFAULT_PREFIXES`]; anything that is
/// already an absolute IRI (or wrapped in `<>`) passes through.
pub fn expand(text: &str) -> Option<Iri> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Iri::new(inner).ok();
    }
    if let Some((prefix, local)) = text.split_once(':') {
        if let Some((_, ns)) = DEFAULT_PREFIXES.iter().find(|(p, _)| *p == prefix) {
            return Iri::new(format!("{ns}{local}")).ok();
        }
    }
    Iri::new(text).ok()
}

/// Renders an IRI as a CURIE under the default prefix table when possible.
pub fn curie(iri: &Iri) -> String {
    DEFAULT_PREFIXES
        .iter()
        .filter(|(_, ns)| iri.as_str().starts_with(ns))
        .max_by_key(|(_, ns)| ns.len())
        .map(|(p, ns)| format!("{p}:{}", &iri.as_str()[ns.len()..]))
        .unwrap_or_else(|| iri.as_str().to_string())
}
