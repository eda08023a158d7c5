// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Checking individuals against entry templates.

use std::collections::BTreeMap;

use super::{ConstraintValue, ContractError, EntryTemplate};
use crate::ns::{self, ag, owl, r2r};
use crate::rdf::{Graph, Iri, Term};
use crate::vocab;

/// The A-Box a template is checked against, plus the entry bindings that
/// `?entry` constraint values resolve to.
#[derive(Debug, Clone, Copy)]
pub struct TemplateContext<'a> {
    pub abox: &'a Graph,
    pub bindings: &'a BTreeMap<String, Iri>,
}

/// Stated types in the A-Box or the schema, closed under `rdfs:subClassOf`.
pub fn individual_has_class(abox: &Graph, individual: &Iri, class: &Iri) -> bool {
    let node: Term = individual.into();
    let hierarchy = vocab::class_hierarchy();
    abox.types_of(&node)
        .into_iter()
        .chain(vocab::full_schema().types_of(&node))
        .any(|t| hierarchy.is_subclass_of(t, class))
}

/// Travel episodes of the trip an offer points to.
fn offer_episodes<'g>(abox: &'g Graph, offer: &Iri) -> Vec<&'g Iri> {
    abox.objects(&offer.into(), &r2r("hasTrip"))
        .into_iter()
        .flat_map(|trip| abox.objects(trip, &r2r("includesTravelEpisode")))
        .filter_map(Term::as_iri)
        .collect()
}

/// Checks `individual` against `template`; `entry` names the entry (or
/// template variable) for error messages.
pub fn check_template(
    ctx: TemplateContext<'_>,
    entry: &str,
    template: &EntryTemplate,
    individual: &Iri,
) -> Result<(), ContractError> {
    let mismatch = |constraint: String| ContractError::TemplateMismatch {
        entry: entry.to_string(),
        constraint,
    };
    if !individual_has_class(ctx.abox, individual, &template.required_class) {
        return Err(mismatch(format!(
            "a {}",
            ns::curie(&template.required_class)
        )));
    }
    let node: Term = individual.into();
    for c in &template.constraints {
        let holds = match &c.value {
            ConstraintValue::Entry(other) if c.predicate == owl("differentFrom") => {
                ctx.bindings.get(other) != Some(individual)
            }
            ConstraintValue::Entry(other) => match ctx.bindings.get(other) {
                Some(b) => ctx.abox.has(individual, &c.predicate, &b.into()),
                None => !ctx.abox.objects(&node, &c.predicate).is_empty(),
            },
            ConstraintValue::Term(Term::Iri(class))
                if c.predicate == ag("includesEpisodeOfType") =>
            {
                offer_episodes(ctx.abox, individual)
                    .into_iter()
                    .any(|ep| individual_has_class(ctx.abox, ep, class))
            }
            ConstraintValue::Term(Term::Iri(class))
                if c.predicate == ag("includesEpisodeNotOfType") =>
            {
                offer_episodes(ctx.abox, individual)
                    .into_iter()
                    .any(|ep| !individual_has_class(ctx.abox, ep, class))
            }
            ConstraintValue::Term(t) => ctx.abox.has(individual, &c.predicate, t),
        };
        if !holds {
            return Err(mismatch(c.to_string()));
        }
    }
    Ok(())
}
