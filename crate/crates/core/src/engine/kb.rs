// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use super::FiringKey;
use crate::contract::{Price, SmartContract, SmartContractInstance};
use crate::ledger::{booking_nodes, export_abox, BookingStatus, EventRecord, LedgerState};
use crate::rdf::{Graph, Iri};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BookingView {
    pub passenger: Iri,
    pub offer_item: Iri,
    pub price_node: Iri,
    pub price: Price,
    pub ride: Iri,
    pub trip: Iri,
    pub reserved_seats: u32,
    pub status: BookingStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RideView {
    pub driver: Iri,
    pub allocated_seats: u32,
}

/// Queryable snapshot of a ledger state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub abox: Graph,
    pub bookings: BTreeMap<Iri, BookingView>,
    pub rides: BTreeMap<Iri, RideView>,
    pub events: Vec<EventRecord>,
    pub firings: BTreeSet<FiringKey>,
    pub contracts: Vec<SmartContract>,
    pub instances: Vec<SmartContractInstance>,
    pub last_seq: u64,
}

impl KnowledgeBase {
    /// Events recorded for `booking`, in ledger order.
    pub fn events_of<'a>(&'a self, booking: &'a Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.events
            .iter()
            .filter(move |e| &e.booking == booking)
            .map(|e| &e.event)
    }

    pub fn price_of(&self, price_node: &Iri) -> Option<&Price> {
        self.bookings
            .values()
            .find(|b| &b.price_node == price_node)
            .map(|b| &b.price)
    }
}

pub fn build_kb(state: &LedgerState) -> KnowledgeBase {
    let bookings = state
        .bookings
        .iter()
        .map(|(iri, b)| {
            let n = booking_nodes(iri);
            let view = BookingView {
                passenger: b.passenger.clone(),
                offer_item: n.offer_item,
                price_node: n.price,
                price: b.price.clone(),
                ride: b.ride.clone(),
                trip: n.trip,
                reserved_seats: b.reserved_seats,
                status: b.status,
            };
            (iri.clone(), view)
        })
        .collect();
    let rides = state
        .rides
        .iter()
        .map(|(iri, r)| {
            let view = RideView {
                driver: r.driver.clone(),
                allocated_seats: r.allocated_seats,
            };
            (iri.clone(), view)
        })
        .collect();
    KnowledgeBase {
        abox: export_abox(state),
        bookings,
        rides,
        events: state.events.clone(),
        firings: state.firings.clone(),
        contracts: state.contracts.values().cloned().collect(),
        instances: state.instances.values().cloned().collect(),
        last_seq: state.last_seq,
    }
}
