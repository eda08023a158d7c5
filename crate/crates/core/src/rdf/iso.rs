// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Blank-node isomorphism by bounded backtracking.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{BlankNode, Graph, RdfError, Term, Triple};

/// Combined blank-node budget across both graphs.
pub const MAX_BLANK_NODES: usize = 24;

pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool, RdfError> {
    let blanks_a = blank_nodes(a);
    let blanks_b = blank_nodes(b);
    let combined = blanks_a.len() + blanks_b.len();
    if combined > MAX_BLANK_NODES {
        return Err(RdfError::Capacity {
            blank_nodes: combined,
            limit: MAX_BLANK_NODES,
        });
    }
    if a.len() != b.len() || blanks_a.len() != blanks_b.len() {
        return Ok(false);
    }

    let (ground_a, blank_triples_a) = split(a);
    let (ground_b, blank_triples_b) = split(b);
    if ground_a != ground_b || blank_triples_a.len() != blank_triples_b.len() {
        return Ok(false);
    }
    if blanks_a.is_empty() {
        return Ok(true);
    }

    let sig_a = signatures(&blank_triples_a);
    let sig_b = signatures(&blank_triples_b);
    let mut candidates: Vec<(BlankNode, Vec<BlankNode>)> = blanks_a
        .iter()
        .map(|x| {
            let cands = blanks_b
                .iter()
                .filter(|y| sig_a.get(x) == sig_b.get(y))
                .cloned()
                .collect();
            (x.clone(), cands)
        })
        .collect();
    if candidates.iter().any(|(_, c)| c.is_empty()) {
        return Ok(false);
    }
    candidates.sort_by_key(|(_, c)| c.len());

    let target: HashSet<&Triple> = blank_triples_b.iter().collect();
    let mut search = Search {
        order: &candidates,
        triples: &blank_triples_a,
        target: &target,
        mapping: HashMap::new(),
        used: HashSet::new(),
    };
    Ok(search.extend(0))
}

fn blank_nodes(g: &Graph) -> BTreeSet<BlankNode> {
    let mut out = BTreeSet::new();
    for t in g {
        for term in [t.subject(), t.object()] {
            if let Term::Blank(b) = term {
                out.insert(b.clone());
            }
        }
    }
    out
}

fn split(g: &Graph) -> (BTreeSet<&Triple>, Vec<Triple>) {
    let mut ground = BTreeSet::new();
    let mut with_blanks = Vec::new();
    for t in g {
        if t.subject().is_blank() || t.object().is_blank() {
            with_blanks.push(t.clone());
        } else {
            ground.insert(t);
        }
    }
    (ground, with_blanks)
}

/// Per blank node: sorted multiset of (position, predicate, other end or `_`).
fn signatures(triples: &[Triple]) -> HashMap<BlankNode, Vec<String>> {
    let mut out: HashMap<BlankNode, Vec<String>> = HashMap::new();
    let other = |t: &Term| match t {
        Term::Blank(_) => "_".to_string(),
        other => other.to_string(),
    };
    for t in triples {
        if let Term::Blank(b) = t.subject() {
            out.entry(b.clone()).or_default().push(format!(
                "s {} {}",
                t.predicate(),
                other(t.object())
            ));
        }
        if let Term::Blank(b) = t.object() {
            out.entry(b.clone()).or_default().push(format!(
                "o {} {}",
                t.predicate(),
                other(t.subject())
            ));
        }
    }
    for sig in out.values_mut() {
        sig.sort();
    }
    out
}

struct Search<'a> {
    order: &'a [(BlankNode, Vec<BlankNode>)],
    triples: &'a [Triple],
    target: &'a HashSet<&'a Triple>,
    mapping: HashMap<BlankNode, BlankNode>,
    used: HashSet<BlankNode>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return self.consistent(None);
        }
        let (node, candidates) = &self.order[depth];
        for cand in candidates {
            if self.used.contains(cand) {
                continue;
            }
            self.mapping.insert(node.clone(), cand.clone());
            self.used.insert(cand.clone());
            if self.consistent(Some(node)) && self.extend(depth + 1) {
                return true;
            }
            self.used.remove(cand);
            self.mapping.remove(node);
        }
        false
    }

    /// Checks every fully-mapped triple touching `focus` (or all, when `None`).
    fn consistent(&self, focus: Option<&BlankNode>) -> bool {
        let touches = |t: &Triple, b: &BlankNode| {
            matches!(t.subject(), Term::Blank(x) if x == b)
                || matches!(t.object(), Term::Blank(x) if x == b)
        };
        self.triples
            .iter()
            .filter(|t| focus.is_none_or(|b| touches(t, b)))
            .all(
                |t| match (self.map_term(t.subject()), self.map_term(t.object())) {
                    (Some(s), Some(o)) => {
                        self.target
                            .contains(&Triple::with_terms(s, t.predicate().clone(), o))
                    }
                    _ => true,
                },
            )
    }

    fn map_term(&self, term: &Term) -> Option<Term> {
        match term {
            Term::Blank(b) => self.mapping.get(b).cloned().map(Term::Blank),
            other => Some(other.clone()),
        }
    }
}

/// Relabels blank nodes as `b0, b1, ...` in first-seen order; used by tests
/// that need a canonical-ish rename.
pub fn relabel_blanks(g: &Graph, prefix: &str) -> Graph {
    let mut names: BTreeMap<BlankNode, BlankNode> = BTreeMap::new();
    let mut rename = |t: &Term| -> Term {
        match t {
            Term::Blank(b) => {
                let next = names.len();
                names
                    .entry(b.clone())
                    .or_insert_with(|| BlankNode::new(format!("{prefix}{next}")).unwrap())
                    .clone()
                    .into()
            }
            other => other.clone(),
        }
    };
    let mut out = Graph::new();
    for (p, ns) in g.prefixes() {
        out.bind_prefix(p, ns).expect("fresh graph");
    }
    for t in g {
        let s = rename(t.subject());
        let o = rename(t.object());
        out.insert(Triple::with_terms(s, t.predicate().clone(), o));
    }
    out
}
