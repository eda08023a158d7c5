// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Structural checks of an A-Box against a T-Box. Closed-world over the
//! stated `rdf:type`s plus the explicit `rdfs:subClassOf` closure; no other
//! inference.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ns::{self, owl, rdf_type, rdfs};
use crate::rdf::{Graph, Iri, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingCode {
    UndeclaredProperty,
    DomainRange,
    ClassCycle,
    Untyped,
}

impl FindingCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FindingCode::UndeclaredProperty => "UNDECLARED_PROPERTY",
            FindingCode::DomainRange => "DOMAIN_RANGE",
            FindingCode::ClassCycle => "CLASS_CYCLE",
            FindingCode::Untyped => "UNTYPED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub severity: Severity,
    pub code: FindingCode,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} {} {}: {}",
            self.severity,
            self.code.as_str(),
            self.subject,
            self.message
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
    }

    pub fn has_code(&self, code: FindingCode) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }
}

/// Superclass closure derived from `rdfs:subClassOf` triples.
#[derive(Debug, Clone, Default)]
pub struct ClassHierarchy {
    parents: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl ClassHierarchy {
    pub fn from_graph(g: &Graph) -> Self {
        let mut parents: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for t in g.triples_matching(None, Some(&rdfs("subClassOf")), None) {
            if let (Term::Iri(c), Term::Iri(p)) = (t.subject(), t.object()) {
                parents.entry(c.clone()).or_default().insert(p.clone());
            }
        }
        ClassHierarchy { parents }
    }

    /// The class itself and every (transitive) superclass; cycle-safe.
    pub fn ancestors(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                if let Some(ps) = self.parents.get(&c) {
                    stack.extend(ps.iter().cloned());
                }
            }
        }
        seen
    }

    pub fn is_subclass_of(&self, class: &Iri, ancestor: &Iri) -> bool {
        class == ancestor || self.ancestors(class).contains(ancestor)
    }

    /// One representative (smallest IRI) per strongly connected cycle.
    pub fn cycles(&self) -> Vec<Iri> {
        let mut out = BTreeSet::new();
        for class in self.parents.keys() {
            let reaches_self = self
                .parents
                .get(class)
                .into_iter()
                .flatten()
                .any(|p| self.ancestors(p).contains(class));
            if reaches_self {
                let members: BTreeSet<Iri> = self
                    .ancestors(class)
                    .into_iter()
                    .filter(|a| self.ancestors(a).contains(class))
                    .collect();
                if let Some(rep) = members.into_iter().next() {
                    out.insert(rep);
                }
            }
        }
        out.into_iter().collect()
    }
}

fn is_top_class(class: &Iri) -> bool {
    class == &owl("Thing") || class == &rdfs("Resource")
}

fn is_datatype(iri: &Iri) -> bool {
    iri.as_str().starts_with(ns::XSD) || iri == &rdfs("Literal") || iri == &ns::rdf("langString")
}

fn declared_properties(tbox: &Graph) -> BTreeSet<Iri> {
    let kinds = [
        owl("ObjectProperty"),
        owl("DatatypeProperty"),
        owl("AnnotationProperty"),
        ns::rdf("Property"),
    ];
    let mut out = BTreeSet::new();
    for kind in kinds {
        for s in tbox.subjects(&rdf_type(), &kind.into()) {
            if let Term::Iri(p) = s {
                out.insert(p.clone());
            }
        }
    }
    out
}

fn declared_schema_terms(tbox: &Graph) -> BTreeSet<Term> {
    let mut out: BTreeSet<Term> = declared_properties(tbox)
        .into_iter()
        .map(Term::Iri)
        .collect();
    for kind in [owl("Class"), rdfs("Class")] {
        out.extend(
            tbox.subjects(&rdf_type(), &kind.into())
                .into_iter()
                .cloned(),
        );
    }
    out
}

pub fn validate(abox: &Graph, tbox: &Graph) -> ValidationReport {
    let hierarchy = ClassHierarchy::from_graph(tbox);
    let declared = declared_properties(tbox);
    let schema_terms = declared_schema_terms(tbox);
    let mut findings = BTreeSet::new();

    for class in hierarchy.cycles() {
        findings.insert(Finding {
            severity: Severity::Error,
            code: FindingCode::ClassCycle,
            subject: class.as_str().to_string(),
            message: "rdfs:subClassOf cycle".into(),
        });
    }

    let types_of = |node: &Term| -> BTreeSet<Iri> {
        abox.types_of(node)
            .into_iter()
            .chain(tbox.types_of(node))
            .cloned()
            .collect()
    };
    let compatible = |types: &BTreeSet<Iri>, expected: &Iri| {
        types.iter().any(|t| hierarchy.is_subclass_of(t, expected))
    };

    let mut reported_undeclared = BTreeSet::new();
    for t in abox {
        let p = t.predicate();
        let builtin = ns::BUILTIN_NAMESPACES
            .iter()
            .any(|namespace| p.as_str().starts_with(namespace));
        if !builtin && !declared.contains(p) {
            if reported_undeclared.insert(p.clone()) {
                findings.insert(Finding {
                    severity: Severity::Warning,
                    code: FindingCode::UndeclaredProperty,
                    subject: p.as_str().to_string(),
                    message: "predicate is not declared in the T-Box".into(),
                });
            }
            continue;
        }
        let p_term: Term = p.clone().into();
        for domain in tbox
            .objects(&p_term, &rdfs("domain"))
            .into_iter()
            .filter_map(Term::as_iri)
        {
            if is_top_class(domain) {
                continue;
            }
            let types = types_of(t.subject());
            if !types.is_empty() && !compatible(&types, domain) {
                findings.insert(Finding {
                    severity: Severity::Error,
                    code: FindingCode::DomainRange,
                    subject: subject_text(t.subject()),
                    message: format!(
                        "{} expects subject of type {}",
                        ns::curie(p),
                        ns::curie(domain)
                    ),
                });
            }
        }
        for range in tbox
            .objects(&p_term, &rdfs("range"))
            .into_iter()
            .filter_map(Term::as_iri)
        {
            if is_top_class(range) {
                continue;
            }
            let problem = match t.object() {
                Term::Literal(lit) if is_datatype(range) => {
                    let ok = range == &rdfs("Literal") || lit.datatype() == range;
                    (!ok).then(|| {
                        format!(
                            "literal of type {} where {} expected",
                            ns::curie(lit.datatype()),
                            ns::curie(range)
                        )
                    })
                }
                Term::Literal(_) => Some(format!("literal where {} expected", ns::curie(range))),
                _ if is_datatype(range) => Some(format!(
                    "resource where literal {} expected",
                    ns::curie(range)
                )),
                node => {
                    let types = types_of(node);
                    (!types.is_empty() && !compatible(&types, range))
                        .then(|| format!("object {} is not a {}", node, ns::curie(range)))
                }
            };
            if let Some(message) = problem {
                findings.insert(Finding {
                    severity: Severity::Error,
                    code: FindingCode::DomainRange,
                    subject: subject_text(t.subject()),
                    message: format!("{}: {message}", ns::curie(p)),
                });
            }
        }
    }

    let subjects: BTreeSet<&Term> = abox.iter().map(|t| t.subject()).collect();
    for s in subjects {
        if schema_terms.contains(s) {
            continue;
        }
        if types_of(s).is_empty() {
            findings.insert(Finding {
                severity: Severity::Warning,
                code: FindingCode::Untyped,
                subject: subject_text(s),
                message: "individual has no rdf:type".into(),
            });
        }
    }

    ValidationReport {
        findings: findings.into_iter().collect(),
    }
}

fn subject_text(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_string(),
        other => other.to_string(),
    }
}
