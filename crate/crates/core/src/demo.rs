// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! The seeded scenario: one driver with a three-seat ride, two passengers,
//! one operator, the agreements and their instances.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, SecondsFormat, Utc};

use crate::contract::{
    booking_contract_with_examples, contract_to_graph, published_contracts, Price, SmartContract,
    Timestamp,
};
use crate::ledger::{Command, Episode, Ledger, LedgerError};
use crate::ns::{ag, rbe};
use crate::rdf::{serialize_turtle, Iri};

pub const DEMO_START: &str = "2024-05-01T08:00:00Z";

/// Hands out timestamps one minute apart.
#[derive(Debug, Clone)]
pub struct StepClock {
    next: DateTime<Utc>,
}

impl StepClock {
    pub fn starting_at(ts: &Timestamp) -> Self {
        let next = DateTime::parse_from_rfc3339(ts.as_str())
            .expect("Timestamp is RFC 3339")
            .with_timezone(&Utc);
        StepClock { next }
    }

    pub fn tick(&mut self) -> Timestamp {
        let ts = self.next.to_rfc3339_opts(SecondsFormat::Secs, true);
        self.next += Duration::minutes(1);
        Timestamp::parse(&ts).expect("formatted as UTC")
    }
}

impl Default for StepClock {
    fn default() -> Self {
        StepClock::starting_at(&Timestamp::parse(DEMO_START).expect("constant"))
    }
}

/// The four published agreements plus the booking contract carrying the
/// example payment and refund conditionals.
pub fn demo_contracts() -> Vec<SmartContract> {
    let mut all = published_contracts();
    all.push(booking_contract_with_examples());
    all
}

pub fn register(contract: &SmartContract) -> Command {
    Command::RegisterContract {
        turtle: serialize_turtle(&contract_to_graph(contract)),
    }
}

/// A booking with a ridesharing leg and, when `rail_to` is given, a
/// following non-ridesharing episode. Episode IRIs derive from the booking.
pub fn booking(
    booking: &Iri,
    passenger: &Iri,
    ride: &Iri,
    price: Price,
    leg: (&str, &str),
    rail_to: Option<&str>,
) -> Command {
    let mut episodes = vec![Episode {
        iri: booking.derive("-leg"),
        ridesharing: true,
        origin: leg.0.to_string(),
        destination: leg.1.to_string(),
    }];
    if let Some(to) = rail_to {
        episodes.push(Episode {
            iri: booking.derive("-rail"),
            ridesharing: false,
            origin: leg.1.to_string(),
            destination: to.to_string(),
        });
    }
    Command::RecordBooking {
        booking: booking.clone(),
        passenger: passenger.clone(),
        price,
        ride: ride.clone(),
        episodes,
        reserved_seats: 1,
    }
}

pub fn instance(contract: &Iri, pairs: &[(&str, Iri)]) -> Command {
    Command::CreateInstance {
        contract: contract.clone(),
        bindings: pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect::<BTreeMap<_, _>>(),
    }
}

/// Seeds the scenario: contracts, operator `ag:tsp1`, ride `ag:ride1` of
/// driver `ag:d1` with 3 seats, a multimodal booking `ag:b1` by `ag:p1`
/// (1500 EUR, stop:A to stop:B, then rail to stop:C), a ridesharing-only
/// booking `ag:b2` by `ag:p2` (1200 EUR), incentive instances for both
/// passengers, a booking-contract instance for `ag:b1`, and the Started
/// and Completed events of `ag:b1`.
pub fn seed_demo(ledger: &mut Ledger, clock: &mut StepClock) -> Result<(), LedgerError> {
    let contracts = demo_contracts();
    for c in &contracts {
        ledger.append(register(c), clock.tick())?;
    }
    let (tsp, d1, ride) = (ag("tsp1"), ag("d1"), ag("ride1"));
    ledger.append(
        Command::RegisterOperator {
            operator: tsp.clone(),
        },
        clock.tick(),
    )?;
    ledger.append(
        Command::RecordRide {
            ride: ride.clone(),
            driver: d1.clone(),
            allocated_seats: 3,
        },
        clock.tick(),
    )?;
    let eur = |minor| Price::new(minor, "EUR").expect("valid currency");
    ledger.append(
        booking(
            &ag("b1"),
            &ag("p1"),
            &ride,
            eur(1500),
            ("stop:A", "stop:B"),
            Some("stop:C"),
        ),
        clock.tick(),
    )?;
    ledger.append(
        booking(
            &ag("b2"),
            &ag("p2"),
            &ride,
            eur(1200),
            ("stop:A", "stop:B"),
            None,
        ),
        clock.tick(),
    )?;

    let booking_contract = &contracts[0];
    ledger.append(
        instance(
            &booking_contract.id,
            &[
                ("driver", d1.clone()),
                ("passenger", ag("p1")),
                ("booking", ag("b1")),
                ("ride", ride.clone()),
            ],
        ),
        clock.tick(),
    )?;
    for c in &contracts[1..4] {
        let passenger_entry = c
            .participants()
            .next()
            .expect("incentives have participants")
            .name
            .clone();
        for p in ["p1", "p2"] {
            ledger.append(
                instance(
                    &c.id,
                    &[(passenger_entry.as_str(), ag(p)), ("tsp", tsp.clone())],
                ),
                clock.tick(),
            )?;
        }
    }
    for event in ["RidesharingStarted", "RidesharingCompleted"] {
        ledger.append(
            Command::RecordEvent {
                booking: ag("b1"),
                event: rbe(event),
            },
            clock.tick(),
        )?;
    }
    Ok(())
}
