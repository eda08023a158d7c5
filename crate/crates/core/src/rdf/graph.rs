// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use super::{Iri, Literal, RdfError, Term, Triple};
use crate::ns;

/// A set of triples plus a prefix table used for (de)serialization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty graph with every prefix of [`ns::DEFAULT_PREFIXES`] bound.
    pub fn with_default_prefixes() -> Self {
        let mut g = Graph::new();
        for (prefix, namespace) in ns::DEFAULT_PREFIXES {
            g.prefixes.insert(prefix.to_string(), namespace.to_string());
        }
        g
    }

    /// Binds `prefix` to `namespace`. Re-binding to the same namespace is a
    /// no-op; re-binding to a different one is rejected.
    pub fn bind_prefix(&mut self, prefix: &str, namespace: &str) -> Result<(), RdfError> {
        match self.prefixes.get(prefix) {
            Some(existing) if existing == namespace => Ok(()),
            Some(existing) => Err(RdfError::PrefixConflict {
                prefix: prefix.to_string(),
                existing: existing.clone(),
                requested: namespace.to_string(),
            }),
            None => {
                self.prefixes
                    .insert(prefix.to_string(), namespace.to_string());
                Ok(())
            }
        }
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn namespace(&self, prefix: &str) -> Option<&str> {
        self.prefixes.get(prefix).map(String::as_str)
    }

    /// Returns `true` when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    /// Validating insert from loose terms.
    pub fn add(&mut self, s: Term, p: Term, o: Term) -> Result<bool, RdfError> {
        Ok(self.insert(Triple::new(s, p, o)?))
    }

    /// Inserts `(s, p, o)` for an IRI subject.
    pub fn put(&mut self, s: &Iri, p: &Iri, o: impl Into<Term>) {
        self.insert(Triple::iri(s, p, o));
    }

    pub fn put_type(&mut self, s: &Iri, class: &Iri) {
        self.put(s, &ns::rdf_type(), class);
    }

    pub fn put_literal(&mut self, s: &Iri, p: &Iri, lit: Literal) {
        self.put(s, p, Term::Literal(lit));
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn has(&self, s: &Iri, p: &Iri, o: &Term) -> bool {
        self.contains(&Triple::iri(s, p, o.clone()))
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in N-Triples order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Every triple agreeing with each bound position, in N-Triples order.
    pub fn triples_matching(
        &self,
        s: Option<&Term>,
        p: Option<&Iri>,
        o: Option<&Term>,
    ) -> Vec<&Triple> {
        self.triples
            .iter()
            .filter(|t| {
                s.is_none_or(|s| t.subject() == s)
                    && p.is_none_or(|p| t.predicate() == p)
                    && o.is_none_or(|o| t.object() == o)
            })
            .collect()
    }

    pub fn objects(&self, s: &Term, p: &Iri) -> Vec<&Term> {
        self.triples_matching(Some(s), Some(p), None)
            .into_iter()
            .map(Triple::object)
            .collect()
    }

    pub fn subjects(&self, p: &Iri, o: &Term) -> Vec<&Term> {
        self.triples_matching(None, Some(p), Some(o))
            .into_iter()
            .map(Triple::subject)
            .collect()
    }

    /// Stated `rdf:type`s of a node.
    pub fn types_of(&self, s: &Term) -> Vec<&Iri> {
        self.objects(s, &ns::rdf_type())
            .into_iter()
            .filter_map(Term::as_iri)
            .collect()
    }

    /// Merges another graph's triples and prefixes into this one.
    pub fn extend(&mut self, other: &Graph) -> Result<(), RdfError> {
        for (prefix, namespace) in &other.prefixes {
            self.bind_prefix(prefix, namespace)?;
        }
        self.triples.extend(other.triples.iter().cloned());
        Ok(())
    }

    /// Set union; prefixes from `self` win.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        for (prefix, namespace) in &other.prefixes {
            out.prefixes
                .entry(prefix.clone())
                .or_insert_with(|| namespace.clone());
        }
        out.triples.extend(other.triples.iter().cloned());
        out
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}
