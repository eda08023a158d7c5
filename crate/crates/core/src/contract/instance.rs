// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::{
    check_template, ContractError, EntryBinding, SmartContract, TemplateContext, Timestamp,
};
use crate::ns;
use crate::rdf::{Graph, Iri};

/// A contract bound to concrete individuals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmartContractInstance {
    pub id: Iri,
    pub contract: Iri,
    pub bindings: BTreeMap<String, Iri>,
    pub created_at: Timestamp,
}

/// `{contract}-instance-{12 hex digits}`, hashed over the sorted bindings.
pub fn instance_id(contract: &Iri, bindings: &BTreeMap<String, Iri>) -> Iri {
    let mut h = Sha256::new();
    h.update(contract.as_str());
    for (name, iri) in bindings {
        h.update(b"\n");
        h.update(name);
        h.update(b"=");
        h.update(iri.as_str());
    }
    let digest = hex::encode(h.finalize());
    contract.derive(&format!("-instance-{}", &digest[..12]))
}

pub fn instantiate(
    contract: &SmartContract,
    bindings: BTreeMap<String, Iri>,
    abox: &Graph,
    now: Timestamp,
) -> Result<SmartContractInstance, ContractError> {
    for name in bindings.keys() {
        if contract.entry(name).is_none() {
            return Err(ContractError::Binding(format!(
                "{} has no entry '{name}'",
                ns::curie(&contract.id)
            )));
        }
    }
    for p in contract.participants() {
        if !bindings.contains_key(&p.name) {
            return Err(ContractError::Binding(format!(
                "participant '{}' is not bound",
                p.name
            )));
        }
    }
    let ctx = TemplateContext {
        abox,
        bindings: &bindings,
    };
    for (name, individual) in &bindings {
        let entry = contract.entry(name).expect("checked above");
        match &entry.binding {
            EntryBinding::Exact(expected) if expected != individual => {
                return Err(ContractError::TemplateMismatch {
                    entry: name.clone(),
                    constraint: format!("oasis:refersExactlyTo {}", ns::curie(expected)),
                });
            }
            EntryBinding::Exact(_) => {}
            EntryBinding::Template(t) => check_template(ctx, name, t, individual)?,
        }
    }
    Ok(SmartContractInstance {
        id: instance_id(&contract.id, &bindings),
        contract: contract.id.clone(),
        bindings,
        created_at: now,
    })
}
