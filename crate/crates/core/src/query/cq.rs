// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! The six competency questions over an exported A-Box.

use super::{is_typed, select, val, var, Pattern, QueryError, Table};
use crate::contract::{
    graph_to_contract, Conditional, ConditionalAtom, EntryTemplate, Operand, Price, VoucherKind,
    VoucherSpec,
};
use crate::ns::{self, oasis, r2r, rdf_type};
use crate::rdf::{Graph, Iri, Term};

fn p(s: super::PatternTerm, pred: Iri, o: super::PatternTerm) -> Pattern {
    Pattern::new(s, val(pred), o)
}

fn require_node(g: &Graph, iri: &Iri, what: &str) -> Result<(), QueryError> {
    if is_typed(g, iri) {
        Ok(())
    } else {
        Err(QueryError::NotFound(format!("{what} {}", ns::curie(iri))))
    }
}

fn literal_text(t: &Term) -> Result<String, QueryError> {
    t.as_literal()
        .map(|l| l.lexical().to_string())
        .ok_or_else(|| QueryError::Integrity(format!("expected a literal, found {t}")))
}

/// CQ1: origin and destination of the ridesharing leg of a booking.
pub fn cq_leg_endpoints(g: &Graph, booking: &Iri) -> Result<(String, String), QueryError> {
    require_node(g, booking, "booking")?;
    let r = select(
        g,
        &[
            p(val(booking), r2r("hasOfferItem"), var("item")),
            p(var("item"), r2r("forTravelEpisode"), var("leg")),
            p(var("leg"), rdf_type(), val(r2r("RidesharingLeg"))),
            p(var("leg"), r2r("origin"), var("origin")),
            p(var("leg"), r2r("destination"), var("destination")),
        ],
    )?;
    match r.rows.as_slice() {
        [] => Err(QueryError::NotFound(format!(
            "ridesharing leg of {}",
            ns::curie(booking)
        ))),
        [_] => Ok((
            literal_text(r.values("origin")[0])?,
            literal_text(r.values("destination")[0])?,
        )),
        _ => Err(QueryError::Integrity(format!(
            "{} has more than one ridesharing leg or endpoint",
            ns::curie(booking)
        ))),
    }
}

/// CQ2: price agreed for the booking's offer item.
pub fn cq_agreed_price(g: &Graph, booking: &Iri) -> Result<Price, QueryError> {
    require_node(g, booking, "booking")?;
    let prices = select(
        g,
        &[
            p(val(booking), r2r("hasOfferItem"), var("item")),
            p(var("item"), r2r("hasPrice"), var("price")),
        ],
    )?;
    match prices.rows.len() {
        0 => {
            return Err(QueryError::NotFound(format!(
                "price of {}",
                ns::curie(booking)
            )))
        }
        1 => {}
        _ => {
            return Err(QueryError::Integrity(format!(
                "{} has more than one price",
                ns::curie(booking)
            )))
        }
    }
    let price = prices.values("price")[0].clone();
    let r = select(
        g,
        &[
            Pattern::new(val(price.clone()), val(r2r("amountMinor")), var("amount")),
            Pattern::new(val(price.clone()), val(r2r("currency")), var("currency")),
        ],
    )?;
    let [row] = r.rows.as_slice() else {
        return Err(QueryError::Integrity(format!(
            "price {price} needs one amount and one currency"
        )));
    };
    let amount: u64 = literal_text(&row[0])?
        .parse()
        .map_err(|_| QueryError::Integrity(format!("bad amount on {price}")))?;
    Price::new(amount, &literal_text(&row[1])?).map_err(|e| QueryError::Integrity(e.to_string()))
}

/// CQ3: seats allocated to a ride, summed over its seat allocations.
pub fn cq_declared_seats(g: &Graph, ride: &Iri) -> Result<u64, QueryError> {
    require_node(g, ride, "ride")?;
    let r = select(
        g,
        &[
            p(val(ride), r2r("hasInventoryAllocation"), var("allocation")),
            p(var("allocation"), r2r("consumable"), val(r2r("Seat"))),
            p(var("allocation"), r2r("quantity"), var("quantity")),
        ],
    )?;
    if r.is_empty() {
        return Err(QueryError::NotFound(format!(
            "seat allocation of {}",
            ns::curie(ride)
        )));
    }
    let mut total = 0u64;
    for q in r.values("quantity") {
        let n: u64 = literal_text(q)?
            .parse()
            .map_err(|_| QueryError::Integrity(format!("bad seat quantity {q}")))?;
        total += n;
    }
    Ok(total)
}

/// CQ4: incentive contracts in which `tsp` takes part, either named
/// directly by an entry or bound by an instance.
pub fn cq_incentives_by_provider(g: &Graph, tsp: &Iri) -> Result<Vec<Iri>, QueryError> {
    let incentive = || {
        p(
            var("contract"),
            rdf_type(),
            val(r2r("IncentiveSmartContract")),
        )
    };
    let direct = select(
        g,
        &[
            incentive(),
            p(var("contract"), oasis("hasEntry"), var("entry")),
            p(var("entry"), oasis("refersExactlyTo"), val(tsp)),
        ],
    )?;
    let bound = select(
        g,
        &[
            p(var("instance"), oasis("instanceOf"), var("contract")),
            incentive(),
            p(var("instance"), oasis("hasEntry"), var("entry")),
            p(
                var("entry"),
                rdf_type(),
                val(oasis("SmartContractEntryParticipant")),
            ),
            p(var("entry"), oasis("refersExactlyTo"), val(tsp)),
        ],
    )?;
    let mut out: Vec<Iri> = direct
        .values("contract")
        .into_iter()
        .chain(bound.values("contract"))
        .filter_map(Term::as_iri)
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn describe_template(var: &str, t: &EntryTemplate) -> String {
    let mut parts = vec![ns::curie(&t.required_class)];
    parts.extend(t.constraints.iter().map(|c| c.to_string()));
    format!("?{var}[{}]", parts.join("; "))
}

fn describe_operand(op: &Operand) -> String {
    match op {
        Operand::Entry(e) => format!("?{e}"),
        Operand::Template { var, template } => describe_template(var, template),
        Operand::Iri(i) => ns::curie(i),
        Operand::Literal(l) => Term::from(l.clone()).to_string(),
    }
}

/// One-line rendering, e.g.
/// `?passenger r2r:book ?offer[osdm:Offer] (times=3)`.
pub fn describe_atom(atom: &ConditionalAtom) -> String {
    let list = |ops: &[Operand]| {
        ops.iter()
            .map(describe_operand)
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    if !atom.subjects.is_empty() {
        out.push_str(&list(&atom.subjects));
        out.push(' ');
    }
    out.push_str(&ns::curie(&atom.operator));
    if !atom.objects.is_empty() {
        out.push(' ');
        out.push_str(&list(&atom.objects));
    }
    let mut extras = Vec::new();
    if !atom.input_params.is_empty() {
        extras.push(format!("input: ?{}", atom.input_params.join(", ?")));
    }
    if !atom.output_params.is_empty() {
        extras.push(format!("output: ?{}", atom.output_params.join(", ?")));
    }
    for arg in &atom.operator_args {
        extras.push(format!("{}={}", arg.key, arg.value.lexical()));
    }
    if !extras.is_empty() {
        out.push_str(&format!(" ({})", extras.join("; ")));
    }
    out
}

pub fn describe_conditional(c: &Conditional) -> String {
    let side = |atoms: &[ConditionalAtom]| {
        atoms
            .iter()
            .map(describe_atom)
            .collect::<Vec<_>>()
            .join(" AND ")
    };
    format!("IF {} THEN {}", side(&c.body), side(&c.head))
}

fn load(g: &Graph, incentive: &Iri) -> Result<crate::contract::SmartContract, QueryError> {
    require_node(g, incentive, "contract")?;
    Ok(graph_to_contract(g, incentive)?)
}

/// CQ5: one line per conditional, describing its body.
pub fn cq_incentive_conditions(g: &Graph, incentive: &Iri) -> Result<Vec<String>, QueryError> {
    let c = load(g, incentive)?;
    Ok(c.conditionals
        .iter()
        .map(|cond| {
            cond.body
                .iter()
                .map(describe_atom)
                .collect::<Vec<_>>()
                .join(" AND ")
        })
        .collect())
}

/// CQ6: the voucher an incentive's `r2r:issue` head grants.
pub fn cq_incentive_benefit(g: &Graph, incentive: &Iri) -> Result<VoucherSpec, QueryError> {
    let c = load(g, incentive)?;
    c.conditionals
        .iter()
        .flat_map(|cond| &cond.head)
        .filter(|atom| atom.operator == r2r("issue"))
        .flat_map(|atom| &atom.objects)
        .find_map(|o| match o {
            Operand::Template { template, .. } => VoucherSpec::from_template(template),
            _ => None,
        })
        .ok_or_else(|| QueryError::NotFound(format!("benefit of {}", ns::curie(incentive))))
}

/// Names accepted by [`answer_table`], with the kind of subject each takes.
pub const QUESTIONS: [(&str, &str); 6] = [
    ("cq1", "booking"),
    ("cq2", "booking"),
    ("cq3", "ride"),
    ("cq4", "tsp"),
    ("cq5", "incentive"),
    ("cq6", "incentive"),
];

/// Answers competency question `question` ("cq1" to "cq6") about `subject`
/// as a table.
pub fn answer_table(g: &Graph, question: &str, subject: &Iri) -> Result<Table, QueryError> {
    let cols = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok(match question {
        "cq1" => {
            let (o, d) = cq_leg_endpoints(g, subject)?;
            Table::new(cols(&["origin", "destination"]), vec![vec![o, d]])
        }
        "cq2" => {
            let p = cq_agreed_price(g, subject)?;
            Table::new(
                cols(&["amount_minor", "currency"]),
                vec![vec![p.amount_minor.to_string(), p.currency.to_string()]],
            )
        }
        "cq3" => {
            let n = cq_declared_seats(g, subject)?;
            Table::new(cols(&["seats"]), vec![vec![n.to_string()]])
        }
        "cq4" => {
            let rows = cq_incentives_by_provider(g, subject)?
                .iter()
                .map(|i| vec![ns::curie(i)])
                .collect();
            Table::new(cols(&["incentive"]), rows)
        }
        "cq5" => {
            let rows = cq_incentive_conditions(g, subject)?
                .into_iter()
                .map(|c| vec![c])
                .collect();
            Table::new(cols(&["condition"]), rows)
        }
        "cq6" => {
            let v = cq_incentive_benefit(g, subject)?;
            let (kind, pct) = match v.kind {
                VoucherKind::Discount(p) => ("discount", p.to_string()),
                VoucherKind::SeatUpgrade => ("seat_upgrade", String::new()),
            };
            Table::new(
                cols(&["benefit", "percentage", "beneficiary", "issuer"]),
                vec![vec![kind.to_string(), pct, v.beneficiary, v.issuer]],
            )
        }
        other => return Err(QueryError::Invalid(format!("unknown question {other:?}"))),
    })
}
