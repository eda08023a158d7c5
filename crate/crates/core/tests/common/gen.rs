// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Random well-formed contracts.

use std::collections::BTreeSet;

use proptest::prelude::*;

use agreementforge::contract::{
    Conditional, ConditionalAtom, Constraint, ContractKind, Entry, EntryBinding, EntryRole,
    EntryTemplate, Operand, OperatorArg, SmartContract,
};
use agreementforge::ns::{ag, osdm, r2r, rbe, tmorg};
use agreementforge::rdf::{Iri, Literal, Term};

fn arb_literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        "[a-zA-Z0-9 \"\\\\\n\t]{0,8}".prop_map(Literal::string),
        any::<i32>().prop_map(|n| Literal::integer(n.into())),
        "[a-z ]{1,6}".prop_map(|s| Literal::lang(s, "en").unwrap()),
    ]
}

fn arb_iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        (0..5u8).prop_map(|i| ag(&format!("thing{i}"))),
        Just(rbe("RidesharingStarted")),
        Just(r2r("Seat")),
    ]
}

fn arb_class() -> impl Strategy<Value = Iri> {
    prop::sample::select(vec![
        osdm("Passenger"),
        osdm("Offer"),
        r2r("Ride"),
        r2r("RidesharingBooking"),
        tmorg("Operator"),
    ])
}

fn arb_predicate() -> impl Strategy<Value = Iri> {
    prop::sample::select(vec![
        r2r("bookedBy"),
        r2r("hasPrice"),
        r2r("consumable"),
        ag("includesEpisodeOfType"),
    ])
}

/// A template whose entry references are indices, resolved once the entry
/// count is known.
#[derive(Debug, Clone)]
enum RawValue {
    Entry(usize),
    Iri(Iri),
    Literal(Literal),
}

fn arb_raw_value() -> impl Strategy<Value = RawValue> {
    prop_oneof![
        any::<usize>().prop_map(RawValue::Entry),
        arb_iri().prop_map(RawValue::Iri),
        arb_literal().prop_map(RawValue::Literal),
    ]
}

fn arb_raw_template() -> impl Strategy<Value = (Iri, Vec<(Iri, RawValue)>)> {
    (
        arb_class(),
        prop::collection::vec((arb_predicate(), arb_raw_value()), 0..3),
    )
}

#[derive(Debug, Clone)]
enum RawOperand {
    Entry(usize),
    Template((Iri, Vec<(Iri, RawValue)>)),
    Iri(Iri),
    Literal(Literal),
}

fn arb_subject() -> impl Strategy<Value = RawOperand> {
    prop_oneof![
        any::<usize>().prop_map(RawOperand::Entry),
        arb_raw_template().prop_map(RawOperand::Template),
    ]
}

fn arb_object() -> impl Strategy<Value = RawOperand> {
    prop_oneof![
        any::<usize>().prop_map(RawOperand::Entry),
        arb_raw_template().prop_map(RawOperand::Template),
        arb_iri().prop_map(RawOperand::Iri),
        arb_literal().prop_map(RawOperand::Literal),
    ]
}

#[derive(Debug, Clone)]
struct RawAtom {
    subjects: Vec<RawOperand>,
    operator: Iri,
    objects: Vec<RawOperand>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    args: Vec<(String, Literal)>,
}

fn arb_atom() -> impl Strategy<Value = RawAtom> {
    (
        prop::collection::vec(arb_subject(), 0..3),
        prop::sample::select(vec![
            r2r("book"),
            r2r("issue"),
            ag("pay"),
            ag("isAssociatedWith"),
        ]),
        prop::collection::vec(arb_object(), 0..3),
        prop::collection::vec(any::<usize>(), 0..3),
        prop::collection::vec(any::<usize>(), 0..2),
        prop::collection::vec(("[a-z]{1,5}", arb_literal()), 0..3),
    )
        .prop_map(
            |(subjects, operator, objects, inputs, outputs, args)| RawAtom {
                subjects,
                operator,
                objects,
                inputs,
                outputs,
                args,
            },
        )
}

#[derive(Debug, Clone)]
struct RawEntry {
    participant: bool,
    exact: Option<Iri>,
    template: (Iri, Vec<(Iri, RawValue)>),
}

fn arb_entry() -> impl Strategy<Value = RawEntry> {
    (
        any::<bool>(),
        prop::option::of(arb_iri()),
        arb_raw_template(),
    )
        .prop_map(|(participant, exact, template)| RawEntry {
            participant,
            exact,
            template,
        })
}

struct Resolver {
    names: Vec<String>,
    next_var: usize,
}

impl Resolver {
    fn name(&self, i: usize) -> String {
        self.names[i % self.names.len()].clone()
    }

    fn template(&self, (class, constraints): &(Iri, Vec<(Iri, RawValue)>)) -> EntryTemplate {
        let mut t = EntryTemplate::of(class.clone());
        for (p, v) in constraints {
            t = t.with(match v {
                RawValue::Entry(i) => Constraint::entry(p.clone(), &self.name(*i)),
                RawValue::Iri(iri) => Constraint::term(p.clone(), iri.clone()),
                RawValue::Literal(l) => Constraint::term(p.clone(), Term::Literal(l.clone())),
            });
        }
        t
    }

    fn operand(&mut self, op: &RawOperand) -> Operand {
        match op {
            RawOperand::Entry(i) => Operand::Entry(self.name(*i)),
            RawOperand::Template(raw) => {
                self.next_var += 1;
                Operand::template(&format!("v{}", self.next_var), self.template(raw))
            }
            RawOperand::Iri(i) => Operand::Iri(i.clone()),
            RawOperand::Literal(l) => Operand::Literal(l.clone()),
        }
    }

    fn atom(&mut self, a: &RawAtom) -> ConditionalAtom {
        let mut atom = ConditionalAtom::new(
            a.subjects.iter().map(|s| self.operand(s)).collect(),
            a.operator.clone(),
            a.objects.iter().map(|o| self.operand(o)).collect(),
        );
        atom.input_params = a.inputs.iter().map(|i| self.name(*i)).collect();
        atom.output_params = a.outputs.iter().map(|i| self.name(*i)).collect();
        let mut keys = BTreeSet::new();
        for (k, v) in &a.args {
            if keys.insert(k.clone()) {
                atom.operator_args.push(OperatorArg {
                    key: k.clone(),
                    value: v.clone(),
                });
            }
        }
        atom
    }
}

prop_compose! {
    pub fn arb_contract()(
        n in 0u32..1000,
        label in "[A-Za-z \"]{0,12}",
        incentive in any::<bool>(),
        entries in prop::collection::vec(arb_entry(), 1..=6),
        conditionals in prop::collection::vec(
            (prop::collection::vec(arb_atom(), 1..3), prop::collection::vec(arb_atom(), 1..3)),
            0..=3,
        ),
    ) -> SmartContract {
        let id = ag(&format!("Generated{n}"));
        let mut r = Resolver {
            names: (0..entries.len()).map(|i| format!("e{i}")).collect(),
            next_var: 0,
        };
        let entries = entries
            .iter()
            .enumerate()
            .map(|(i, e)| Entry {
                name: r.names[i].clone(),
                role: if e.participant { EntryRole::Participant } else { EntryRole::Value },
                binding: match &e.exact {
                    Some(iri) => EntryBinding::Exact(iri.clone()),
                    None => EntryBinding::Template(r.template(&e.template)),
                },
            })
            .collect();
        let conditionals = conditionals
            .iter()
            .enumerate()
            .map(|(i, (body, head))| Conditional {
                id: id.derive(&format!("-conditional-{i}")),
                body: body.iter().map(|a| r.atom(a)).collect(),
                head: head.iter().map(|a| r.atom(a)).collect(),
            })
            .collect();
        SmartContract {
            id,
            label,
            kind: if incentive { ContractKind::Incentive } else { ContractKind::Generic },
            entries,
            conditionals,
        }
    }
}
