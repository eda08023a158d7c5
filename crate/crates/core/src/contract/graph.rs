// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Contracts as OASIS individuals and back.
//!
//! Every model element gets an IRI derived from its parent's, so the same
//! contract always produces the same graph.

use std::collections::BTreeMap;

use super::{
    Conditional, ConditionalAtom, Constraint, ConstraintValue, ContractError, ContractKind, Entry,
    EntryBinding, EntryRole, EntryTemplate, Operand, OperatorArg, SmartContract,
    SmartContractInstance,
};
use crate::ns::{oasis, r2r, rdf_type, rdfs, xsd};
use crate::rdf::{Graph, Iri, Literal, Term};

fn position(i: usize) -> Literal {
    Literal::typed(i.to_string(), xsd("nonNegativeInteger")).expect("valid datatype")
}

fn entry_node(contract: &Iri, name: &str) -> Iri {
    contract.derive(&format!("-entry-{name}"))
}

struct Writer<'a> {
    g: Graph,
    contract: &'a Iri,
}

impl Writer<'_> {
    fn template(&mut self, owner: &Iri, t: &EntryTemplate) {
        let node = owner.derive("-template");
        self.g.put(owner, &oasis("refersAsNewTo"), node.clone());
        self.g.put_type(&node, &oasis("EntryTemplate"));
        self.g
            .put(&node, &oasis("requiredClass"), t.required_class.clone());
        for (i, c) in t.constraints.iter().enumerate() {
            let k = node.derive(&format!("-constraint-{i}"));
            self.g.put(&node, &oasis("hasConstraint"), k.clone());
            self.g.put_type(&k, &oasis("TemplateConstraint"));
            self.g.put_literal(&k, &oasis("position"), position(i));
            self.g.put(&k, &oasis("onProperty"), c.predicate.clone());
            match &c.value {
                ConstraintValue::Term(t) => self.g.put(&k, &oasis("constraintValue"), t.clone()),
                ConstraintValue::Entry(e) => {
                    self.g
                        .put(&k, &oasis("constraintEntry"), entry_node(self.contract, e))
                }
            }
        }
    }

    fn operand(&mut self, node: &Iri, op: &Operand) {
        match op {
            Operand::Entry(name) => self.g.put(
                node,
                &oasis("refersToEntry"),
                entry_node(self.contract, name),
            ),
            Operand::Template { var, template } => {
                self.g
                    .put_literal(node, &oasis("variable"), Literal::string(var.as_str()));
                self.template(node, template);
            }
            Operand::Iri(i) => self.g.put(node, &oasis("refersExactlyTo"), i.clone()),
            Operand::Literal(l) => self.g.put(node, &oasis("hasValue"), l.clone()),
        }
    }

    fn part(&mut self, atom: &Iri, link: &str, class: &str, node: Iri, i: usize) {
        self.g.put(atom, &oasis(link), node.clone());
        self.g.put_type(&node, &oasis(class));
        self.g.put_literal(&node, &oasis("position"), position(i));
    }

    fn atom(&mut self, node: &Iri, atom: &ConditionalAtom) {
        self.g.put_type(node, &oasis("ConditionalAtom"));
        for (j, s) in atom.subjects.iter().enumerate() {
            let n = node.derive(&format!("-subject-{j}"));
            self.part(node, "hasSubject", "ConditionalSubject", n.clone(), j);
            self.operand(&n, s);
        }
        let op = node.derive("-operator");
        self.g.put(node, &oasis("hasOperator"), op.clone());
        self.g.put_type(&op, &oasis("ConditionalOperator"));
        self.g
            .put(&op, &oasis("refersExactlyTo"), atom.operator.clone());
        for (j, o) in atom.objects.iter().enumerate() {
            let n = node.derive(&format!("-object-{j}"));
            self.part(node, "hasObject", "ConditionalObject", n.clone(), j);
            self.operand(&n, o);
        }
        for (j, p) in atom.input_params.iter().enumerate() {
            let n = node.derive(&format!("-input-{j}"));
            self.part(
                node,
                "hasInputParameter",
                "ConditionalInputParameter",
                n.clone(),
                j,
            );
            self.g
                .put(&n, &oasis("refersToEntry"), entry_node(self.contract, p));
        }
        for (j, p) in atom.output_params.iter().enumerate() {
            let n = node.derive(&format!("-output-{j}"));
            self.part(
                node,
                "hasOutputParameter",
                "ConditionalOutputParameter",
                n.clone(),
                j,
            );
            self.g
                .put(&n, &oasis("refersToEntry"), entry_node(self.contract, p));
        }
        for (j, arg) in atom.operator_args.iter().enumerate() {
            let n = node.derive(&format!("-arg-{j}"));
            self.part(
                node,
                "hasOperatorArgument",
                "ConditionalOperatorArgument",
                n.clone(),
                j,
            );
            self.g.put_literal(
                &n,
                &oasis("argumentName"),
                Literal::string(arg.key.as_str()),
            );
            self.g
                .put_literal(&n, &oasis("argumentValue"), arg.value.clone());
        }
    }

    fn side(
        &mut self,
        cond: &Iri,
        link: &str,
        class: &str,
        suffix: &str,
        atoms: &[ConditionalAtom],
    ) {
        let node = cond.derive(suffix);
        self.g.put(cond, &oasis(link), node.clone());
        self.g.put_type(&node, &oasis(class));
        for (i, a) in atoms.iter().enumerate() {
            let n = node.derive(&format!("-atom-{i}"));
            self.g.put(&node, &oasis("hasAtom"), n.clone());
            self.g.put_literal(&n, &oasis("position"), position(i));
            self.atom(&n, a);
        }
    }
}

pub fn contract_to_graph(c: &SmartContract) -> Graph {
    let mut w = Writer {
        g: Graph::with_default_prefixes(),
        contract: &c.id,
    };
    let class = match c.kind {
        ContractKind::Generic => oasis("SmartContract"),
        ContractKind::Incentive => r2r("IncentiveSmartContract"),
    };
    w.g.put_type(&c.id, &class);
    w.g.put_literal(&c.id, &rdfs("label"), Literal::string(c.label.as_str()));
    for (i, e) in c.entries.iter().enumerate() {
        let node = entry_node(&c.id, &e.name);
        w.g.put(&c.id, &oasis("hasEntry"), node.clone());
        let class = match e.role {
            EntryRole::Participant => "SmartContractEntryParticipant",
            EntryRole::Value => "SmartContractEntryValue",
        };
        w.g.put_type(&node, &oasis(class));
        w.g.put_literal(&node, &oasis("entryName"), Literal::string(e.name.as_str()));
        w.g.put_literal(&node, &oasis("position"), position(i));
        match &e.binding {
            EntryBinding::Exact(i) => w.g.put(&node, &oasis("refersExactlyTo"), i.clone()),
            EntryBinding::Template(t) => w.template(&node, t),
        }
    }
    if !c.conditionals.is_empty() {
        let set = c.id.derive("-conditionals");
        w.g.put(&c.id, &oasis("hasConditionalSet"), set.clone());
        w.g.put_type(&set, &oasis("ConditionalSet"));
        for (i, cond) in c.conditionals.iter().enumerate() {
            w.g.put(&set, &oasis("hasConditional"), cond.id.clone());
            w.g.put_type(&cond.id, &oasis("Conditional"));
            w.g.put_literal(&cond.id, &oasis("position"), position(i));
            w.side(&cond.id, "hasBody", "ConditionalBody", "-body", &cond.body);
            w.side(&cond.id, "hasHead", "ConditionalHead", "-head", &cond.head);
        }
    }
    w.g
}

/// Instance node, `oasis:instanceOf` link and one entry node per binding.
pub fn instance_to_graph(inst: &SmartContractInstance, contract: &SmartContract) -> Graph {
    let mut g = Graph::with_default_prefixes();
    g.put_type(&inst.id, &oasis("SmartContractInstance"));
    g.put(&inst.id, &oasis("instanceOf"), inst.contract.clone());
    g.put_literal(
        &inst.id,
        &oasis("createdAt"),
        Literal::typed(inst.created_at.as_str(), xsd("dateTime")).expect("valid datatype"),
    );
    for (name, individual) in &inst.bindings {
        let node = inst.id.derive(&format!("-entry-{name}"));
        let class = match contract.entry(name).map(|e| e.role) {
            Some(EntryRole::Participant) => "SmartContractEntryParticipant",
            _ => "SmartContractEntryValue",
        };
        g.put(&inst.id, &oasis("hasEntry"), node.clone());
        g.put_type(&node, &oasis(class));
        g.put_literal(&node, &oasis("entryName"), Literal::string(name.as_str()));
        g.put(
            &node,
            &oasis("instantiatesEntry"),
            entry_node(&inst.contract, name),
        );
        g.put(&node, &oasis("refersExactlyTo"), individual.clone());
    }
    g
}

/// Every contract node in `g`, sorted.
pub fn contract_ids_in(g: &Graph) -> Vec<Iri> {
    let mut out: Vec<Iri> = [oasis("SmartContract"), r2r("IncentiveSmartContract")]
        .into_iter()
        .flat_map(|class| g.subjects(&rdf_type(), &class.into()))
        .filter_map(Term::as_iri)
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

struct Reader<'a> {
    g: &'a Graph,
    /// entry node → entry name
    entries: BTreeMap<Iri, String>,
}

fn structural(node: &Iri, message: impl Into<String>) -> ContractError {
    ContractError::Structural {
        node: node.as_str().to_string(),
        message: message.into(),
    }
}

impl Reader<'_> {
    fn objects(&self, node: &Iri, p: &str) -> Vec<&Term> {
        self.g.objects(&node.into(), &oasis(p))
    }

    fn optional(&self, node: &Iri, p: &str) -> Result<Option<&Term>, ContractError> {
        match self.objects(node, p).as_slice() {
            [] => Ok(None),
            [one] => Ok(Some(one)),
            _ => Err(structural(node, format!("more than one oasis:{p}"))),
        }
    }

    fn one(&self, node: &Iri, p: &str) -> Result<&Term, ContractError> {
        self.optional(node, p)?
            .ok_or_else(|| structural(node, format!("missing oasis:{p}")))
    }

    fn one_iri(&self, node: &Iri, p: &str) -> Result<Iri, ContractError> {
        self.one(node, p)?
            .as_iri()
            .cloned()
            .ok_or_else(|| structural(node, format!("oasis:{p} must be an IRI")))
    }

    fn one_literal(&self, node: &Iri, p: &str) -> Result<Literal, ContractError> {
        self.one(node, p)?
            .as_literal()
            .cloned()
            .ok_or_else(|| structural(node, format!("oasis:{p} must be a literal")))
    }

    /// Objects of `p`, which must be IRIs carrying `oasis:position`, in
    /// position order.
    fn ordered(&self, node: &Iri, p: &str) -> Result<Vec<Iri>, ContractError> {
        let mut out = Vec::new();
        for t in self.objects(node, p) {
            let child = t
                .as_iri()
                .ok_or_else(|| structural(node, format!("oasis:{p} must point to an IRI")))?;
            let pos = self.one_literal(child, "position")?;
            let pos: u64 = pos
                .lexical()
                .parse()
                .map_err(|_| structural(child, "oasis:position is not a non-negative integer"))?;
            out.push((pos, child.clone()));
        }
        out.sort();
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(structural(
                node,
                format!("duplicate positions under oasis:{p}"),
            ));
        }
        Ok(out.into_iter().map(|(_, n)| n).collect())
    }

    fn entry_ref(&self, node: &Iri, p: &str) -> Result<String, ContractError> {
        let target = self.one_iri(node, p)?;
        self.entries
            .get(&target)
            .cloned()
            .ok_or_else(|| structural(node, format!("reference to undeclared entry <{target}>")))
    }

    fn template(&self, owner: &Iri) -> Result<EntryTemplate, ContractError> {
        let node = self.one_iri(owner, "refersAsNewTo")?;
        let mut t = EntryTemplate::of(self.one_iri(&node, "requiredClass")?);
        for k in self.ordered(&node, "hasConstraint")? {
            let predicate = self.one_iri(&k, "onProperty")?;
            let value = match (
                self.optional(&k, "constraintValue")?,
                self.optional(&k, "constraintEntry")?,
            ) {
                (Some(v), None) => ConstraintValue::Term(v.clone()),
                (None, Some(_)) => ConstraintValue::Entry(self.entry_ref(&k, "constraintEntry")?),
                _ => {
                    return Err(structural(
                        &k,
                        "constraint needs exactly one value or entry",
                    ))
                }
            };
            t.constraints.push(Constraint { predicate, value });
        }
        Ok(t)
    }

    fn operand(&self, node: &Iri) -> Result<Operand, ContractError> {
        let has = |p: &str| !self.objects(node, p).is_empty();
        let kinds = [
            has("refersToEntry"),
            has("refersAsNewTo"),
            has("refersExactlyTo"),
            has("hasValue"),
        ];
        if kinds.iter().filter(|k| **k).count() != 1 {
            return Err(structural(
                node,
                "operand needs exactly one of entry, template, IRI or value",
            ));
        }
        Ok(if kinds[0] {
            Operand::Entry(self.entry_ref(node, "refersToEntry")?)
        } else if kinds[1] {
            Operand::Template {
                var: self.one_literal(node, "variable")?.lexical().to_string(),
                template: self.template(node)?,
            }
        } else if kinds[2] {
            Operand::Iri(self.one_iri(node, "refersExactlyTo")?)
        } else {
            Operand::Literal(self.one_literal(node, "hasValue")?)
        })
    }

    fn atom(&self, node: &Iri) -> Result<ConditionalAtom, ContractError> {
        let op = self.one_iri(node, "hasOperator")?;
        let mut atom = ConditionalAtom::new(
            Vec::new(),
            self.one_iri(&op, "refersExactlyTo")?,
            Vec::new(),
        );
        for n in self.ordered(node, "hasSubject")? {
            atom.subjects.push(self.operand(&n)?);
        }
        for n in self.ordered(node, "hasObject")? {
            atom.objects.push(self.operand(&n)?);
        }
        for n in self.ordered(node, "hasInputParameter")? {
            atom.input_params.push(self.entry_ref(&n, "refersToEntry")?);
        }
        for n in self.ordered(node, "hasOutputParameter")? {
            atom.output_params
                .push(self.entry_ref(&n, "refersToEntry")?);
        }
        for n in self.ordered(node, "hasOperatorArgument")? {
            atom.operator_args.push(OperatorArg {
                key: self.one_literal(&n, "argumentName")?.lexical().to_string(),
                value: self.one_literal(&n, "argumentValue")?,
            });
        }
        Ok(atom)
    }

    fn side(&self, cond: &Iri, link: &str) -> Result<Vec<ConditionalAtom>, ContractError> {
        let node = self.one_iri(cond, link)?;
        self.ordered(&node, "hasAtom")?
            .iter()
            .map(|a| self.atom(a))
            .collect()
    }
}

/// Reads the contract rooted at `id`; the result passes
/// [`SmartContract::check`].
pub fn graph_to_contract(g: &Graph, id: &Iri) -> Result<SmartContract, ContractError> {
    let node: Term = id.into();
    let types = g.types_of(&node);
    let kind = if types.contains(&&r2r("IncentiveSmartContract")) {
        ContractKind::Incentive
    } else if types.contains(&&oasis("SmartContract")) {
        ContractKind::Generic
    } else {
        return Err(structural(id, "not typed as a smart contract"));
    };
    let label = match g.objects(&node, &rdfs("label")).as_slice() {
        [] => String::new(),
        [Term::Literal(l)] => l.lexical().to_string(),
        _ => return Err(structural(id, "expected at most one literal rdfs:label")),
    };

    let mut r = Reader {
        g,
        entries: BTreeMap::new(),
    };
    let entry_nodes = r.ordered(id, "hasEntry")?;
    if entry_nodes.is_empty() {
        return Err(structural(id, "contract declares no entries"));
    }
    let mut names = Vec::new();
    for n in &entry_nodes {
        let name = r.one_literal(n, "entryName")?.lexical().to_string();
        r.entries.insert(n.clone(), name.clone());
        names.push(name);
    }
    let mut entries = Vec::new();
    for (n, name) in entry_nodes.iter().zip(names) {
        let types = g.types_of(&n.into());
        let role = if types.contains(&&oasis("SmartContractEntryParticipant")) {
            EntryRole::Participant
        } else if types.contains(&&oasis("SmartContractEntryValue")) {
            EntryRole::Value
        } else {
            return Err(structural(n, "entry is neither a participant nor a value"));
        };
        let binding = match (
            r.optional(n, "refersExactlyTo")?,
            r.optional(n, "refersAsNewTo")?,
        ) {
            (Some(_), None) => EntryBinding::Exact(r.one_iri(n, "refersExactlyTo")?),
            (None, Some(_)) => EntryBinding::Template(r.template(n)?),
            _ => {
                return Err(structural(
                    n,
                    "entry needs exactly one of refersExactlyTo / refersAsNewTo",
                ))
            }
        };
        entries.push(Entry {
            name,
            role,
            binding,
        });
    }

    let mut conditionals = Vec::new();
    if let Some(set) = r.optional(id, "hasConditionalSet")? {
        let set = set
            .as_iri()
            .ok_or_else(|| structural(id, "oasis:hasConditionalSet must be an IRI"))?
            .clone();
        for cond in r.ordered(&set, "hasConditional")? {
            conditionals.push(Conditional {
                body: r.side(&cond, "hasBody")?,
                head: r.side(&cond, "hasHead")?,
                id: cond,
            });
        }
    }

    let contract = SmartContract {
        id: id.clone(),
        label,
        kind,
        entries,
        conditionals,
    };
    contract.check()?;
    Ok(contract)
}
