// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use super::matcher::Bindings;
use super::{binding_digest, match_body, EngineError, KnowledgeBase, Obligation, ObligationKind};
use crate::contract::{
    check_template, Conditional, ConditionalAtom, ConstraintValue, EntryBinding, Operand,
    SmartContract, TemplateContext, VoucherSpec,
};
use crate::ns::{self, ag, owl, r2r};
use crate::rdf::{Iri, Term};

type Env = BTreeMap<String, Iri>;

/// What a head atom needs before it can become an obligation.
enum HeadPlan {
    Issue(VoucherSpec),
    Pay {
        from: String,
        to: String,
        price: String,
    },
    Refund {
        to: String,
        price: String,
    },
}

impl HeadPlan {
    fn needed(&self) -> Vec<&str> {
        match self {
            HeadPlan::Issue(v) => vec![&v.issuer, &v.beneficiary],
            HeadPlan::Pay { from, to, price } => vec![from, to, price],
            HeadPlan::Refund { to, price } => vec![to, price],
        }
    }
}

fn plan(c: &Conditional) -> Result<HeadPlan, EngineError> {
    let bad = |message: &str| EngineError::Unsupported {
        conditional: c.id.as_str().to_string(),
        message: message.to_string(),
    };
    let [atom] = c.head.as_slice() else {
        return Err(bad("heads with more than one atom are not executable"));
    };
    let ConditionalAtom {
        subjects,
        operator,
        objects,
        input_params,
        output_params,
        ..
    } = atom;
    if operator == &r2r("issue") {
        let voucher = match (subjects.as_slice(), objects.as_slice()) {
            ([Operand::Entry(_)], [Operand::Template { template, .. }]) => {
                VoucherSpec::from_template(template)
            }
            _ => None,
        };
        return voucher
            .map(HeadPlan::Issue)
            .ok_or_else(|| bad("r2r:issue needs an issuer entry and a voucher template"));
    }
    if operator == &ag("pay") {
        return match (
            subjects.as_slice(),
            objects.as_slice(),
            input_params.as_slice(),
        ) {
            ([Operand::Entry(from)], [Operand::Entry(to)], [price]) => Ok(HeadPlan::Pay {
                from: from.clone(),
                to: to.clone(),
                price: price.clone(),
            }),
            _ => Err(bad(
                "ag:pay needs payer and payee entries and one price input",
            )),
        };
    }
    if operator == &ag("refund") {
        return match (objects.as_slice(), output_params.as_slice()) {
            ([Operand::Entry(to)], [price]) => Ok(HeadPlan::Refund {
                to: to.clone(),
                price: price.clone(),
            }),
            _ => Err(bad("ag:refund needs a payee entry and one price output")),
        };
    }
    Err(EngineError::UnsupportedOperator(ns::curie(operator)))
}

/// Fills in entries the head needs but the body did not bind: first from
/// the earliest compatible instance of the contract, then by following
/// single-valued template links from bound entries.
fn resolve(
    contract: &SmartContract,
    m: &Bindings,
    needed: &[&str],
    kb: &KnowledgeBase,
) -> Option<Env> {
    let mut env: Env = m.vars.clone();
    let compatible = kb.instances.iter().find(|inst| {
        inst.contract == contract.id
            && inst
                .bindings
                .iter()
                .all(|(k, v)| env.get(k).is_none_or(|bound| bound == v))
    });
    if let Some(inst) = compatible {
        for (k, v) in &inst.bindings {
            env.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }

    let mut links = Vec::new();
    for e in &contract.entries {
        if let EntryBinding::Template(t) = &e.binding {
            for c in &t.constraints {
                if let ConstraintValue::Entry(other) = &c.value {
                    if c.predicate != owl("differentFrom") {
                        links.push((e.name.as_str(), &c.predicate, other.as_str()));
                    }
                }
            }
        }
    }
    let abox = &kb.abox;
    loop {
        let mut changed = false;
        for (from, p, to) in &links {
            match (env.get(*from).cloned(), env.get(*to).cloned()) {
                (Some(s), None) => {
                    if let [Term::Iri(o)] = abox.objects(&s.into(), p).as_slice() {
                        env.insert(to.to_string(), o.clone());
                        changed = true;
                    }
                }
                (None, Some(o)) => {
                    if let [Term::Iri(s)] = abox.subjects(p, &o.into()).as_slice() {
                        env.insert(from.to_string(), s.clone());
                        changed = true;
                    }
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }

    let ctx = TemplateContext {
        abox,
        bindings: &env,
    };
    for name in needed {
        let value = env.get(*name)?;
        let ok = match &contract.entry(name)?.binding {
            EntryBinding::Exact(iri) => iri == value,
            EntryBinding::Template(t) => check_template(ctx, name, t, value).is_ok(),
        };
        if !ok {
            return None;
        }
    }
    Some(env)
}

fn obligation_kind(plan: &HeadPlan, env: &Env, kb: &KnowledgeBase) -> Option<ObligationKind> {
    Some(match plan {
        HeadPlan::Issue(v) => ObligationKind::IssueVoucher {
            voucher: v.kind.clone(),
            issuer: env.get(&v.issuer)?.clone(),
            beneficiary: env.get(&v.beneficiary)?.clone(),
        },
        HeadPlan::Pay { from, to, price } => ObligationKind::Pay {
            price: kb.price_of(env.get(price)?)?.clone(),
            from: env.get(from)?.clone(),
            to: env.get(to)?.clone(),
        },
        HeadPlan::Refund { to, price } => ObligationKind::Refund {
            price: kb.price_of(env.get(price)?)?.clone(),
            to: env.get(to)?.clone(),
        },
    })
}

/// Inline templates in subject position only witness that someone else
/// exists; they are left out of the firing key so one match per remaining
/// binding fires, however many witnesses there are.
pub fn witness_vars(cond: &Conditional) -> BTreeSet<&str> {
    cond.body
        .iter()
        .flat_map(|atom| &atom.subjects)
        .filter_map(|s| match s {
            Operand::Template { var, .. } => Some(var.as_str()),
            _ => None,
        })
        .collect()
}

/// New obligations, ordered by contract, conditional and firing key. Matches
/// whose key is already in `kb.firings`, or whose head entries cannot be
/// resolved yet, emit nothing.
pub fn evaluate(
    contracts: &[SmartContract],
    kb: &KnowledgeBase,
) -> Result<Vec<Obligation>, EngineError> {
    let mut sorted: Vec<&SmartContract> = contracts.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for contract in sorted {
        for cond in &contract.conditionals {
            let plan = plan(cond)?;
            let witnesses = witness_vars(cond);
            for m in match_body(contract, cond, kb)? {
                let keyed: Env = m
                    .vars
                    .iter()
                    .filter(|(name, _)| !witnesses.contains(name.as_str()))
                    .map(|(n, v)| (n.clone(), v.clone()))
                    .collect();
                let key = binding_digest(&cond.id, &keyed, m.k);
                if kb.firings.contains(&key) || seen.contains(&key) {
                    continue;
                }
                let Some(env) = resolve(contract, &m, &plan.needed(), kb) else {
                    continue;
                };
                let Some(kind) = obligation_kind(&plan, &env, kb) else {
                    continue;
                };
                seen.insert(key);
                out.push(Obligation {
                    kind,
                    contract: contract.id.clone(),
                    source_conditional: cond.id.clone(),
                    firing_key: key,
                    created_at_seq: kb.last_seq,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.contract, &a.source_conditional, a.firing_key).cmp(&(
            &b.contract,
            &b.source_conditional,
            b.firing_key,
        ))
    });
    Ok(out)
}
