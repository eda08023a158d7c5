// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ontological smart contracts: entries, templates and conditionals, the
//! four ride-sharing agreements, and their RDF form.

mod builders;
mod graph;
mod instance;
mod template;
mod value;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{
    booking_contract_with_examples, example_conditionals, multimodal_discount_incentive,
    published_contracts, ride_with_other_passengers_incentive, ridesharing_booking_contract,
};
pub use graph::{contract_ids_in, contract_to_graph, graph_to_contract, instance_to_graph};
pub use instance::{instance_id, instantiate, SmartContractInstance};
pub use template::{check_template, individual_has_class, TemplateContext};
pub use value::{Currency, Percentage, Price, Timestamp};

use crate::ns;
use crate::rdf::{Iri, Literal, RdfError, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("structural error at <{node}>: {message}")]
    Structural { node: String, message: String },
    #[error("binding error: {0}")]
    Binding(String),
    #[error("template mismatch for entry '{entry}': {constraint}")]
    TemplateMismatch { entry: String, constraint: String },
    #[error(transparent)]
    Rdf(#[from] RdfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContractKind {
    Generic,
    Incentive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryRole {
    Participant,
    Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintValue {
    Term(Term),
    /// The individual bound to the named entry.
    Entry(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub predicate: Iri,
    pub value: ConstraintValue,
}

impl Constraint {
    pub fn term(predicate: Iri, value: impl Into<Term>) -> Self {
        Constraint {
            predicate,
            value: ConstraintValue::Term(value.into()),
        }
    }

    pub fn entry(predicate: Iri, entry: &str) -> Self {
        Constraint {
            predicate,
            value: ConstraintValue::Entry(entry.to_string()),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ConstraintValue::Term(Term::Iri(i)) => {
                write!(f, "{} {}", ns::curie(&self.predicate), ns::curie(i))
            }
            ConstraintValue::Term(t) => write!(f, "{} {}", ns::curie(&self.predicate), t),
            ConstraintValue::Entry(e) => write!(f, "{} ?{}", ns::curie(&self.predicate), e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntryTemplate {
    pub required_class: Iri,
    pub constraints: Vec<Constraint>,
}

impl EntryTemplate {
    pub fn of(required_class: Iri) -> Self {
        EntryTemplate {
            required_class,
            constraints: Vec::new(),
        }
    }

    pub fn with(mut self, constraint: Constraint) -> Self {
        self.constraints.push(constraint);
        self
    }

    /// Entry names referenced by the constraints.
    pub fn entry_refs(&self) -> impl Iterator<Item = &str> {
        self.constraints.iter().filter_map(|c| match &c.value {
            ConstraintValue::Entry(e) => Some(e.as_str()),
            ConstraintValue::Term(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EntryBinding {
    /// `oasis:refersExactlyTo`
    Exact(Iri),
    /// `oasis:refersAsNewTo`
    Template(EntryTemplate),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    pub name: String,
    pub role: EntryRole,
    pub binding: EntryBinding,
}

impl Entry {
    pub fn participant(name: &str, template: EntryTemplate) -> Self {
        Entry {
            name: name.to_string(),
            role: EntryRole::Participant,
            binding: EntryBinding::Template(template),
        }
    }

    pub fn value(name: &str, template: EntryTemplate) -> Self {
        Entry {
            name: name.to_string(),
            role: EntryRole::Value,
            binding: EntryBinding::Template(template),
        }
    }

    pub fn template(&self) -> Option<&EntryTemplate> {
        match &self.binding {
            EntryBinding::Template(t) => Some(t),
            EntryBinding::Exact(_) => None,
        }
    }
}

/// One position of an atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Entry(String),
    /// An inline template introducing the variable `var`.
    Template {
        var: String,
        template: EntryTemplate,
    },
    Iri(Iri),
    Literal(Literal),
}

impl Operand {
    pub fn entry(name: &str) -> Self {
        Operand::Entry(name.to_string())
    }

    pub fn template(var: &str, template: EntryTemplate) -> Self {
        Operand::Template {
            var: var.to_string(),
            template,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorArg {
    pub key: String,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalAtom {
    pub subjects: Vec<Operand>,
    pub operator: Iri,
    pub objects: Vec<Operand>,
    pub input_params: Vec<String>,
    pub output_params: Vec<String>,
    pub operator_args: Vec<OperatorArg>,
}

impl ConditionalAtom {
    pub fn new(subjects: Vec<Operand>, operator: Iri, objects: Vec<Operand>) -> Self {
        ConditionalAtom {
            subjects,
            operator,
            objects,
            input_params: Vec::new(),
            output_params: Vec::new(),
            operator_args: Vec::new(),
        }
    }

    pub fn arg(&self, key: &str) -> Option<&Literal> {
        self.operator_args
            .iter()
            .find(|a| a.key == key)
            .map(|a| &a.value)
    }

    fn operands(&self) -> impl Iterator<Item = &Operand> {
        self.subjects.iter().chain(&self.objects)
    }
}

/// Body implies head; both are conjunctions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conditional {
    pub id: Iri,
    pub body: Vec<ConditionalAtom>,
    pub head: Vec<ConditionalAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmartContract {
    pub id: Iri,
    pub label: String,
    pub kind: ContractKind,
    pub entries: Vec<Entry>,
    pub conditionals: Vec<Conditional>,
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SmartContract {
    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn participants(&self) -> impl Iterator<Item = &Entry> {
        self.entries
            .iter()
            .filter(|e| e.role == EntryRole::Participant)
    }

    /// Structural invariants: unique well-formed names, every referenced
    /// entry declared, non-empty conditionals, unique operator-argument keys.
    pub fn check(&self) -> Result<(), ContractError> {
        let structural = |node: &Iri, message: String| ContractError::Structural {
            node: node.as_str().to_string(),
            message,
        };
        if self.entries.is_empty() {
            return Err(structural(&self.id, "contract declares no entries".into()));
        }
        let mut names = BTreeSet::new();
        for e in &self.entries {
            if !is_name(&e.name) {
                return Err(structural(&self.id, format!("bad entry name {:?}", e.name)));
            }
            if !names.insert(e.name.as_str()) {
                return Err(structural(
                    &self.id,
                    format!("duplicate entry '{}'", e.name),
                ));
            }
        }
        let declared = |name: &str, node: &Iri| -> Result<(), ContractError> {
            if names.contains(name) {
                Ok(())
            } else {
                Err(structural(
                    node,
                    format!("reference to undeclared entry '{name}'"),
                ))
            }
        };
        let check_template = |t: &EntryTemplate, node: &Iri| -> Result<(), ContractError> {
            t.entry_refs().try_for_each(|r| declared(r, node))
        };
        for e in &self.entries {
            if let EntryBinding::Template(t) = &e.binding {
                check_template(t, &self.id)?;
            }
        }
        let mut conditional_ids = BTreeSet::new();
        for c in &self.conditionals {
            if !conditional_ids.insert(&c.id) {
                return Err(structural(&c.id, "duplicate conditional id".into()));
            }
            if c.body.is_empty() || c.head.is_empty() {
                return Err(structural(
                    &c.id,
                    "conditional needs a non-empty body and head".into(),
                ));
            }
            let mut vars = BTreeSet::new();
            for atom in c.body.iter().chain(&c.head) {
                for (i, s) in atom.subjects.iter().enumerate() {
                    if !matches!(s, Operand::Entry(_) | Operand::Template { .. }) {
                        return Err(structural(
                            &c.id,
                            format!("subject {i} must be an entry or a template"),
                        ));
                    }
                }
                for op in atom.operands() {
                    match op {
                        Operand::Entry(name) => declared(name, &c.id)?,
                        Operand::Template { var, template } => {
                            if !is_name(var)
                                || names.contains(var.as_str())
                                || !vars.insert(var.clone())
                            {
                                return Err(structural(
                                    &c.id,
                                    format!("bad or duplicate template variable {var:?}"),
                                ));
                            }
                            check_template(template, &c.id)?;
                        }
                        Operand::Iri(_) | Operand::Literal(_) => {}
                    }
                }
                for p in atom.input_params.iter().chain(&atom.output_params) {
                    declared(p, &c.id)?;
                }
                let mut keys = BTreeSet::new();
                for arg in &atom.operator_args {
                    if arg.key.is_empty() || !keys.insert(arg.key.as_str()) {
                        return Err(structural(
                            &c.id,
                            format!("duplicate operator argument '{}'", arg.key),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "percentage", rename_all = "snake_case")]
pub enum VoucherKind {
    Discount(Percentage),
    SeatUpgrade,
}

/// A voucher a head atom issues; `beneficiary` and `issuer` name entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VoucherSpec {
    pub kind: VoucherKind,
    pub beneficiary: String,
    pub issuer: String,
}

impl VoucherSpec {
    pub fn template(&self) -> EntryTemplate {
        let template = match &self.kind {
            VoucherKind::Discount(pct) => {
                EntryTemplate::of(ns::r2r("DiscountVoucher")).with(Constraint::term(
                    ns::r2r("discountPercentage"),
                    Literal::typed(pct.to_string(), ns::xsd("decimal")).expect("decimal"),
                ))
            }
            VoucherKind::SeatUpgrade => EntryTemplate::of(ns::r2r("SeatUpgradeVoucher")),
        };
        template
            .with(Constraint::entry(ns::r2r("beneficiary"), &self.beneficiary))
            .with(Constraint::entry(ns::r2r("issuedBy"), &self.issuer))
    }

    /// Reads a voucher back from its template form.
    pub fn from_template(t: &EntryTemplate) -> Option<VoucherSpec> {
        let find_entry = |p: &Iri| {
            t.constraints.iter().find_map(|c| match &c.value {
                ConstraintValue::Entry(e) if &c.predicate == p => Some(e.clone()),
                _ => None,
            })
        };
        let kind = if t.required_class == ns::r2r("SeatUpgradeVoucher") {
            VoucherKind::SeatUpgrade
        } else if t.required_class == ns::r2r("DiscountVoucher") {
            let pct = t.constraints.iter().find_map(|c| match &c.value {
                ConstraintValue::Term(Term::Literal(l))
                    if c.predicate == ns::r2r("discountPercentage") =>
                {
                    l.lexical().parse::<Percentage>().ok()
                }
                _ => None,
            })?;
            VoucherKind::Discount(pct)
        } else {
            return None;
        };
        Some(VoucherSpec {
            kind,
            beneficiary: find_entry(&ns::r2r("beneficiary"))?,
            issuer: find_entry(&ns::r2r("issuedBy"))?,
        })
    }
}

impl fmt::Display for VoucherSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            VoucherKind::Discount(p) => write!(f, "{p}% discount voucher")?,
            VoucherKind::SeatUpgrade => write!(f, "seat upgrade voucher")?,
        }
        write!(f, " for {} issued by {}", self.beneficiary, self.issuer)
    }
}
