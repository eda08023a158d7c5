// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Body matching over the knowledge-base indices.
//!
//! Variables are the entries named in the body plus the variables of inline
//! object templates. Inline subject templates are existential and never
//! bound. An atom carrying a `times` argument aggregates its object and
//! binds the repetition index `k` instead.

use std::collections::{BTreeMap, BTreeSet};

use super::{EngineError, KnowledgeBase};
use crate::contract::{
    check_template, Conditional, ConditionalAtom, EntryBinding, EntryTemplate, Operand,
    SmartContract, TemplateContext,
};
use crate::ledger::BookingStatus;
use crate::ns::{self, ag, r2r};
use crate::rdf::Iri;
use crate::vocab;

/// One body match. `k` is the repetition index, 0 when the body has no
/// `times` argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bindings {
    pub vars: BTreeMap<String, Iri>,
    pub k: u32,
}

type Partial = BTreeMap<String, Iri>;

struct Matcher<'a> {
    contract: &'a SmartContract,
    kb: &'a KnowledgeBase,
    conditional: &'a Conditional,
    /// Templates of the inline object variables.
    object_templates: BTreeMap<&'a str, &'a EntryTemplate>,
}

fn unsupported(c: &Conditional, message: impl Into<String>) -> EngineError {
    EngineError::Unsupported {
        conditional: c.id.as_str().to_string(),
        message: message.into(),
    }
}

/// Positive integer value of the atom's `times` argument, if present.
pub(crate) fn times_arg(
    c: &Conditional,
    atom: &ConditionalAtom,
) -> Result<Option<u32>, EngineError> {
    match atom.arg("times") {
        None => Ok(None),
        Some(lit) => match lit.lexical().parse::<u32>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(unsupported(
                c,
                format!("bad times argument {:?}", lit.lexical()),
            )),
        },
    }
}

impl<'a> Matcher<'a> {
    fn ctx<'b>(&'b self, bindings: &'b Partial) -> TemplateContext<'b> {
        TemplateContext {
            abox: &self.kb.abox,
            bindings,
        }
    }

    /// Entry `name` may take `value` given the bindings so far.
    fn admits_entry(&self, name: &str, value: &Iri, partial: &Partial) -> bool {
        match self.contract.entry(name).map(|e| &e.binding) {
            Some(EntryBinding::Exact(iri)) => iri == value,
            Some(EntryBinding::Template(t)) => {
                check_template(self.ctx(partial), name, t, value).is_ok()
            }
            None => false,
        }
    }

    fn live_bookings(&self) -> impl Iterator<Item = (&'a Iri, &'a super::BookingView)> + 'a {
        self.kb
            .bookings
            .iter()
            .filter(|(_, b)| b.status != BookingStatus::Cancelled)
    }

    fn targets(booking: &'a Iri, view: &'a super::BookingView) -> [&'a Iri; 3] {
        [booking, &view.offer_item, &view.ride]
    }

    /// Binds `name` to `value` unless it conflicts or fails its template.
    fn extend(&self, partial: &Partial, name: &str, value: &Iri) -> Option<Partial> {
        match partial.get(name) {
            Some(v) => (v == value).then(|| partial.clone()),
            None => {
                let mut next = partial.clone();
                next.insert(name.to_string(), value.clone());
                self.admits_entry(name, value, &next).then_some(next)
            }
        }
    }

    fn associated(
        &self,
        atom: &ConditionalAtom,
        partial: &Partial,
    ) -> Result<Vec<Partial>, EngineError> {
        let ([Operand::Entry(name)], [Operand::Iri(concept)]) =
            (atom.subjects.as_slice(), atom.objects.as_slice())
        else {
            return Err(unsupported(
                self.conditional,
                "ag:isAssociatedWith needs one entry subject and one concept object",
            ));
        };
        let candidates: Vec<&Iri> = match partial.get(name) {
            Some(v) => vec![v],
            None => self.kb.bookings.keys().collect(),
        };
        let mut out = Vec::new();
        for b in candidates {
            if self
                .kb
                .events_of(b)
                .any(|e| vocab::is_narrower_or_equal(e, concept))
            {
                out.extend(self.extend(partial, name, b));
            }
        }
        Ok(out)
    }

    /// Passengers of live bookings that reach `target`.
    fn bookers(&self, target: &Iri) -> BTreeSet<&'a Iri> {
        self.live_bookings()
            .filter(|(b, v)| Self::targets(b, v).contains(&target))
            .map(|(_, v)| &v.passenger)
            .collect()
    }

    fn book(&self, atom: &ConditionalAtom, partial: &Partial) -> Result<Vec<Partial>, EngineError> {
        let [object] = atom.objects.as_slice() else {
            return Err(unsupported(
                self.conditional,
                "r2r:book needs exactly one object",
            ));
        };
        if atom.subjects.is_empty() {
            return Err(unsupported(self.conditional, "r2r:book needs a subject"));
        }
        let candidates: BTreeSet<&Iri> = match object {
            Operand::Entry(name) if partial.contains_key(name) => [&partial[name]].into(),
            Operand::Iri(i) => [i].into(),
            Operand::Literal(_) => {
                return Err(unsupported(
                    self.conditional,
                    "r2r:book object cannot be a literal",
                ))
            }
            _ => self
                .live_bookings()
                .flat_map(|(b, v)| Self::targets(b, v))
                .collect(),
        };
        let mut out = Vec::new();
        for target in candidates {
            let start = match object {
                Operand::Entry(name) => self.extend(partial, name, target),
                Operand::Template { var, template } => {
                    let mut next = partial.clone();
                    next.insert(var.clone(), target.clone());
                    check_template(self.ctx(&next), var, template, target)
                        .is_ok()
                        .then_some(next)
                }
                _ => Some(partial.clone()),
            };
            let Some(start) = start else { continue };
            let bookers = self.bookers(target);
            let mut partials = vec![start];
            for subject in &atom.subjects {
                let mut next = Vec::new();
                for p in &partials {
                    match subject {
                        Operand::Entry(name) => {
                            for who in &bookers {
                                next.extend(self.extend(p, name, who));
                            }
                        }
                        Operand::Template { var, template } => {
                            if bookers
                                .iter()
                                .any(|who| check_template(self.ctx(p), var, template, who).is_ok())
                            {
                                next.push(p.clone());
                            }
                        }
                        _ => {
                            return Err(unsupported(
                                self.conditional,
                                "r2r:book subjects must be entries or templates",
                            ))
                        }
                    }
                }
                partials = next;
            }
            out.extend(partials);
        }
        Ok(out)
    }

    /// `(partial, count)` per passenger: bookings whose targets satisfy the
    /// object.
    fn book_counts(
        &self,
        atom: &ConditionalAtom,
        partial: &Partial,
    ) -> Result<Vec<(Partial, usize)>, EngineError> {
        let ([Operand::Entry(name)], [object]) =
            (atom.subjects.as_slice(), atom.objects.as_slice())
        else {
            return Err(unsupported(
                self.conditional,
                "a repeated r2r:book needs one entry subject and one object",
            ));
        };
        let passengers: BTreeSet<&Iri> = match partial.get(name) {
            Some(v) => [v].into(),
            None => self.live_bookings().map(|(_, v)| &v.passenger).collect(),
        };
        let mut out = Vec::new();
        for who in passengers {
            let Some(p) = self.extend(partial, name, who) else {
                continue;
            };
            let count = self
                .live_bookings()
                .filter(|(_, v)| &v.passenger == who)
                .filter(|(b, v)| {
                    Self::targets(b, v).into_iter().any(|t| match object {
                        Operand::Template { var, template } => {
                            check_template(self.ctx(&p), var, template, t).is_ok()
                        }
                        Operand::Iri(i) => i == t,
                        Operand::Entry(e) => p.get(e) == Some(t),
                        Operand::Literal(_) => false,
                    })
                })
                .count();
            out.push((p, count));
        }
        Ok(out)
    }

    /// Every bound entry and object variable against its template, with
    /// all bindings known.
    fn final_check(&self, vars: &Partial) -> bool {
        vars.iter().all(
            |(name, value)| match self.object_templates.get(name.as_str()) {
                Some(t) => check_template(self.ctx(vars), name, t, value).is_ok(),
                None => self.admits_entry(name, value, vars),
            },
        )
    }
}

/// The complete set of body matches of `conditional` (which belongs to
/// `contract`) over `kb`.
pub fn match_body(
    contract: &SmartContract,
    conditional: &Conditional,
    kb: &KnowledgeBase,
) -> Result<BTreeSet<Bindings>, EngineError> {
    let mut object_templates = BTreeMap::new();
    for atom in &conditional.body {
        for o in &atom.objects {
            if let Operand::Template { var, template } = o {
                object_templates.insert(var.as_str(), template);
            }
        }
    }
    let m = Matcher {
        contract,
        kb,
        conditional,
        object_templates,
    };

    let mut repeated = None;
    let mut plain = Vec::new();
    for atom in &conditional.body {
        if atom.operator != ag("isAssociatedWith") && atom.operator != r2r("book") {
            return Err(EngineError::UnsupportedOperator(ns::curie(&atom.operator)));
        }
        match times_arg(conditional, atom)? {
            Some(n) if atom.operator == r2r("book") => {
                if repeated.replace((atom, n)).is_some() {
                    return Err(unsupported(
                        conditional,
                        "at most one repeated atom per body",
                    ));
                }
            }
            Some(_) => {
                return Err(unsupported(
                    conditional,
                    "only r2r:book takes a times argument",
                ))
            }
            None => plain.push(atom),
        }
    }

    let mut partials = vec![Partial::new()];
    for atom in plain {
        let mut next = Vec::new();
        for p in &partials {
            if atom.operator == r2r("book") {
                next.extend(m.book(atom, p)?);
            } else {
                next.extend(m.associated(atom, p)?);
            }
        }
        partials = next;
    }

    let mut out = BTreeSet::new();
    for p in partials {
        match repeated {
            None => {
                if m.final_check(&p) {
                    out.insert(Bindings { vars: p, k: 0 });
                }
            }
            Some((atom, n)) => {
                for (vars, count) in m.book_counts(atom, &p)? {
                    if !m.final_check(&vars) {
                        continue;
                    }
                    for k in 1..=(count / n as usize) as u32 {
                        out.insert(Bindings {
                            vars: vars.clone(),
                            k,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}
