// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::contract::Price;
use crate::engine::Obligation;
use crate::rdf::Iri;

/// One travel episode of a booked trip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Episode {
    pub iri: Iri,
    /// Typed `r2r:RidesharingLeg` when set, plain `r2r:TravelEpisode` otherwise.
    pub ridesharing: bool,
    pub origin: String,
    pub destination: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Command {
    RegisterContract {
        turtle: String,
    },
    CreateInstance {
        contract: Iri,
        bindings: BTreeMap<String, Iri>,
    },
    /// Declares a transport service provider (`tmorg:Operator`).
    RegisterOperator {
        operator: Iri,
    },
    RecordRide {
        ride: Iri,
        driver: Iri,
        allocated_seats: u32,
    },
    RecordBooking {
        booking: Iri,
        passenger: Iri,
        price: Price,
        ride: Iri,
        episodes: Vec<Episode>,
        reserved_seats: u32,
    },
    RecordEvent {
        booking: Iri,
        event: Iri,
    },
    RecordObligation(Obligation),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::RegisterContract { .. } => "register_contract",
            Command::CreateInstance { .. } => "create_instance",
            Command::RegisterOperator { .. } => "register_operator",
            Command::RecordRide { .. } => "record_ride",
            Command::RecordBooking { .. } => "record_booking",
            Command::RecordEvent { .. } => "record_event",
            Command::RecordObligation(_) => "record_obligation",
        }
    }
}
