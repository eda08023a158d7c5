// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use super::{export_abox, Command, Episode, LedgerError};
use crate::contract::{
    contract_ids_in, graph_to_contract, instantiate, EntryBinding, Operand, Price, SmartContract,
    SmartContractInstance, Timestamp,
};
use crate::engine::{FiringKey, Obligation};
use crate::ns::{self, owl, rdf_type};
use crate::rdf::{parse_turtle, Iri};
use crate::vocab::{self, EventFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RideRecord {
    pub driver: Iri,
    pub allocated_seats: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BookingStatus {
    Booked,
    Started,
    Completed,
    Cancelled,
    NoShow,
}

impl BookingStatus {
    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            BookingStatus::Completed | BookingStatus::Cancelled | BookingStatus::NoShow
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BookingRecord {
    pub passenger: Iri,
    pub price: Price,
    pub ride: Iri,
    pub episodes: Vec<Episode>,
    pub reserved_seats: u32,
    pub status: BookingStatus,
}

impl BookingRecord {
    /// The episode the offer item is for.
    pub fn ridesharing_leg(&self) -> &Episode {
        self.episodes
            .iter()
            .find(|e| e.ridesharing)
            .expect("bookings are recorded with exactly one ridesharing leg")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub booking: Iri,
    pub event: Iri,
    pub seq: u64,
}

/// Everything the ledger knows, rebuilt by applying commands in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerState {
    pub contracts: BTreeMap<Iri, SmartContract>,
    pub instances: BTreeMap<Iri, SmartContractInstance>,
    pub operators: BTreeSet<Iri>,
    pub rides: BTreeMap<Iri, RideRecord>,
    pub bookings: BTreeMap<Iri, BookingRecord>,
    pub events: Vec<EventRecord>,
    pub obligations: Vec<Obligation>,
    pub firings: BTreeSet<FiringKey>,
    pub last_seq: u64,
}

/// Where `event` may move a booking in `status`, if anywhere.
pub fn next_status(status: BookingStatus, event: &Iri) -> Option<BookingStatus> {
    use BookingStatus::*;
    match (vocab::event_family(event)?, status) {
        (EventFamily::Started, Booked) => Some(Started),
        (EventFamily::Completed, Started) => Some(Completed),
        (EventFamily::Cancelled, Booked) => Some(Cancelled),
        (EventFamily::NoShow, Booked) => Some(NoShow),
        (EventFamily::Delayed, Booked | Started) => Some(status),
        _ => None,
    }
}

fn fresh(taken: bool, what: &str, iri: &Iri) -> Result<(), LedgerError> {
    if taken {
        Err(LedgerError::Duplicate(format!(
            "{what} {} already recorded",
            ns::curie(iri)
        )))
    } else {
        Ok(())
    }
}

fn unknown(what: &str, iri: &Iri) -> LedgerError {
    LedgerError::UnknownRef(format!("{what} {}", ns::curie(iri)))
}

impl LedgerState {
    /// Seats held by non-cancelled bookings on `ride`.
    pub fn reserved_seats(&self, ride: &Iri) -> u32 {
        self.bookings
            .values()
            .filter(|b| &b.ride == ride && b.status != BookingStatus::Cancelled)
            .map(|b| b.reserved_seats)
            .sum()
    }

    fn is_individual(&self, iri: &Iri) -> bool {
        self.rides.contains_key(iri)
            || self.bookings.contains_key(iri)
            || self
                .bookings
                .values()
                .any(|b| b.episodes.iter().any(|e| &e.iri == iri))
    }

    /// Checks `cmd` against the current state and applies it; on error the
    /// state is unchanged.
    pub fn apply(&mut self, seq: u64, ts: &Timestamp, cmd: &Command) -> Result<(), LedgerError> {
        match cmd {
            Command::RegisterContract { turtle } => {
                let g = parse_turtle(turtle).map_err(|e| LedgerError::Validation(e.to_string()))?;
                let ids = contract_ids_in(&g);
                let [id] = ids.as_slice() else {
                    return Err(LedgerError::Validation(format!(
                        "expected exactly one contract in the document, found {}",
                        ids.len()
                    )));
                };
                fresh(self.contracts.contains_key(id), "contract", id)?;
                let contract = graph_to_contract(&g, id)?;
                check_classes_declared(&contract)?;
                if let Some(existing) = contract.conditionals.iter().find(|c| {
                    self.contracts
                        .values()
                        .any(|o| o.conditionals.iter().any(|x| x.id == c.id))
                }) {
                    return Err(LedgerError::Duplicate(format!(
                        "conditional {} already registered",
                        ns::curie(&existing.id)
                    )));
                }
                self.contracts.insert(id.clone(), contract);
            }
            Command::CreateInstance { contract, bindings } => {
                let c = self
                    .contracts
                    .get(contract)
                    .ok_or_else(|| unknown("contract", contract))?;
                let abox = export_abox(self);
                let inst = instantiate(c, bindings.clone(), &abox, ts.clone())?;
                fresh(self.instances.contains_key(&inst.id), "instance", &inst.id)?;
                self.instances.insert(inst.id.clone(), inst);
            }
            Command::RegisterOperator { operator } => {
                fresh(self.operators.contains(operator), "operator", operator)?;
                if self.is_individual(operator) {
                    return Err(LedgerError::Duplicate(format!(
                        "{} names another individual",
                        ns::curie(operator)
                    )));
                }
                self.operators.insert(operator.clone());
            }
            Command::RecordRide {
                ride,
                driver,
                allocated_seats,
            } => {
                fresh(
                    self.is_individual(ride) || self.operators.contains(ride),
                    "ride",
                    ride,
                )?;
                if *allocated_seats == 0 {
                    return Err(LedgerError::Validation(
                        "a ride needs at least one seat".into(),
                    ));
                }
                self.rides.insert(
                    ride.clone(),
                    RideRecord {
                        driver: driver.clone(),
                        allocated_seats: *allocated_seats,
                    },
                );
            }
            Command::RecordBooking {
                booking,
                passenger,
                price,
                ride,
                episodes,
                reserved_seats,
            } => {
                fresh(
                    self.is_individual(booking) || self.operators.contains(booking),
                    "booking",
                    booking,
                )?;
                let r = self.rides.get(ride).ok_or_else(|| unknown("ride", ride))?;
                if *reserved_seats == 0 {
                    return Err(LedgerError::Validation(
                        "reserved seats must be at least 1".into(),
                    ));
                }
                if episodes.iter().filter(|e| e.ridesharing).count() != 1 {
                    return Err(LedgerError::Validation(
                        "a booking needs exactly one ridesharing leg among its episodes".into(),
                    ));
                }
                let mut seen = BTreeSet::new();
                for e in episodes {
                    if !seen.insert(&e.iri) || self.is_individual(&e.iri) || &e.iri == booking {
                        return Err(LedgerError::Duplicate(format!(
                            "episode {} reused",
                            ns::curie(&e.iri)
                        )));
                    }
                }
                let held = self.reserved_seats(ride);
                if held + reserved_seats > r.allocated_seats {
                    return Err(LedgerError::Capacity(format!(
                        "{} has {} seats, {held} reserved, {reserved_seats} requested",
                        ns::curie(ride),
                        r.allocated_seats
                    )));
                }
                self.bookings.insert(
                    booking.clone(),
                    BookingRecord {
                        passenger: passenger.clone(),
                        price: price.clone(),
                        ride: ride.clone(),
                        episodes: episodes.clone(),
                        reserved_seats: *reserved_seats,
                        status: BookingStatus::Booked,
                    },
                );
            }
            Command::RecordEvent { booking, event } => {
                if !vocab::is_event_concept(event) {
                    return Err(LedgerError::Validation(format!(
                        "{} is not a booking event concept",
                        ns::curie(event)
                    )));
                }
                let b = self
                    .bookings
                    .get_mut(booking)
                    .ok_or_else(|| unknown("booking", booking))?;
                let next = next_status(b.status, event).ok_or_else(|| {
                    LedgerError::EventOrder(format!(
                        "{} not admissible for {} in state {:?}",
                        ns::curie(event),
                        ns::curie(booking),
                        b.status
                    ))
                })?;
                b.status = next;
                self.events.push(EventRecord {
                    booking: booking.clone(),
                    event: event.clone(),
                    seq,
                });
            }
            Command::RecordObligation(o) => {
                let c = self
                    .contracts
                    .get(&o.contract)
                    .ok_or_else(|| unknown("contract", &o.contract))?;
                if !c.conditionals.iter().any(|x| x.id == o.source_conditional) {
                    return Err(unknown("conditional", &o.source_conditional));
                }
                if self.firings.contains(&o.firing_key) {
                    return Err(LedgerError::Duplicate(format!(
                        "firing {} already recorded",
                        o.firing_key
                    )));
                }
                self.firings.insert(o.firing_key);
                self.obligations.push(o.clone());
            }
        }
        self.last_seq = seq;
        Ok(())
    }
}

/// Required classes of entry and inline templates must be schema classes.
fn check_classes_declared(c: &SmartContract) -> Result<(), LedgerError> {
    let schema = vocab::full_schema();
    let declared = |class: &Iri| schema.has(class, &rdf_type(), &owl("Class").into());
    let mut classes = Vec::new();
    for e in &c.entries {
        if let EntryBinding::Template(t) = &e.binding {
            classes.push(&t.required_class);
        }
    }
    for atom in c
        .conditionals
        .iter()
        .flat_map(|x| x.body.iter().chain(&x.head))
    {
        for op in atom.subjects.iter().chain(&atom.objects) {
            if let Operand::Template { template, .. } = op {
                classes.push(&template.required_class);
            }
        }
    }
    match classes.into_iter().find(|c| !declared(c)) {
        Some(class) => Err(LedgerError::Validation(format!(
            "template class {} is not declared in the schema",
            ns::curie(class)
        ))),
        None => Ok(()),
    }
}
