// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use sha2::{Digest, Sha256};

use super::LedgerState;
use crate::contract::{contract_to_graph, instance_to_graph, Price, VoucherKind};
use crate::engine::ObligationKind;
use crate::ns::{ag, osdm, r2r, tmorg, xsd};
use crate::rdf::{serialize_turtle, Graph, Iri, Literal};

/// Nodes minted for the parts of a booking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BookingNodes {
    pub offer_item: Iri,
    pub price: Iri,
    pub reservation: Iri,
    pub trip: Iri,
}

pub fn booking_nodes(booking: &Iri) -> BookingNodes {
    BookingNodes {
        offer_item: booking.derive("-offerItem"),
        price: booking.derive("-price"),
        reservation: booking.derive("-reservation"),
        trip: booking.derive("-trip"),
    }
}

pub fn allocation_node(ride: &Iri) -> Iri {
    ride.derive("-allocation")
}

fn count(n: impl ToString) -> Literal {
    Literal::typed(n.to_string(), xsd("nonNegativeInteger")).expect("valid datatype")
}

fn put_price(g: &mut Graph, node: &Iri, price: &Price) {
    g.put_type(node, &osdm("Price"));
    g.put_literal(node, &r2r("amountMinor"), count(price.amount_minor));
    g.put_literal(
        node,
        &r2r("currency"),
        Literal::string(price.currency.as_str()),
    );
}

/// The A-Box view of the state: contracts, instances, rides, bookings with
/// their events, and recorded obligations.
pub fn export_abox(state: &LedgerState) -> Graph {
    let mut g = Graph::with_default_prefixes();
    for c in state.contracts.values() {
        g.extend(&contract_to_graph(c)).expect("default prefixes");
    }
    for inst in state.instances.values() {
        if let Some(c) = state.contracts.get(&inst.contract) {
            g.extend(&instance_to_graph(inst, c))
                .expect("default prefixes");
        }
    }
    for op in &state.operators {
        g.put_type(op, &tmorg("Operator"));
    }
    for (ride, r) in &state.rides {
        let allocation = allocation_node(ride);
        g.put_type(ride, &r2r("Ride"));
        g.put(ride, &r2r("operatedBy"), r.driver.clone());
        g.put_type(&r.driver, &r2r("Driver"));
        g.put(ride, &r2r("hasInventoryAllocation"), allocation.clone());
        g.put_type(&allocation, &r2r("InventoryAllocation"));
        g.put(&allocation, &r2r("consumable"), r2r("Seat"));
        g.put_literal(&allocation, &r2r("quantity"), count(r.allocated_seats));
    }
    for (booking, b) in &state.bookings {
        let n = booking_nodes(booking);
        g.put_type(booking, &r2r("RidesharingBooking"));
        g.put(booking, &r2r("bookedBy"), b.passenger.clone());
        g.put_type(&b.passenger, &osdm("Passenger"));
        g.put(booking, &r2r("hasOfferItem"), n.offer_item.clone());

        g.put_type(&n.offer_item, &r2r("OfferItem"));
        g.put(&n.offer_item, &r2r("hasPrice"), n.price.clone());
        put_price(&mut g, &n.price, &b.price);
        g.put(
            &n.offer_item,
            &r2r("forTravelEpisode"),
            b.ridesharing_leg().iri.clone(),
        );
        g.put(
            &n.offer_item,
            &r2r("includesReservation"),
            n.reservation.clone(),
        );
        g.put(&n.offer_item, &r2r("hasTrip"), n.trip.clone());

        g.put_type(&n.reservation, &r2r("InventoryReservation"));
        g.put(&n.reservation, &r2r("consumable"), r2r("Seat"));
        g.put_literal(&n.reservation, &r2r("quantity"), count(b.reserved_seats));

        g.put_type(&n.trip, &osdm("Trip"));
        for e in &b.episodes {
            g.put(&n.trip, &r2r("includesTravelEpisode"), e.iri.clone());
            if e.ridesharing {
                g.put_type(&e.iri, &r2r("RidesharingLeg"));
                g.put(&e.iri, &r2r("hasTransportationService"), b.ride.clone());
            } else {
                g.put_type(&e.iri, &r2r("TravelEpisode"));
            }
            g.put_literal(&e.iri, &r2r("origin"), Literal::string(e.origin.as_str()));
            g.put_literal(
                &e.iri,
                &r2r("destination"),
                Literal::string(e.destination.as_str()),
            );
        }
    }
    for e in &state.events {
        g.put(&e.booking, &r2r("relatesToEvent"), e.event.clone());
    }
    for o in &state.obligations {
        let node = o.iri();
        match &o.kind {
            ObligationKind::IssueVoucher {
                voucher,
                issuer,
                beneficiary,
            } => {
                match voucher {
                    VoucherKind::Discount(p) => {
                        g.put_type(&node, &r2r("DiscountVoucher"));
                        g.put_literal(
                            &node,
                            &r2r("discountPercentage"),
                            Literal::typed(p.to_string(), xsd("decimal")).expect("valid datatype"),
                        );
                    }
                    VoucherKind::SeatUpgrade => g.put_type(&node, &r2r("SeatUpgradeVoucher")),
                }
                g.put(&node, &r2r("issuedBy"), issuer.clone());
                g.put(&node, &r2r("beneficiary"), beneficiary.clone());
            }
            ObligationKind::Pay { price, from, to } => {
                g.put_type(&node, &ag("PaymentObligation"));
                g.put(&node, &ag("debtor"), from.clone());
                g.put(&node, &ag("creditor"), to.clone());
                let amount = node.derive("-amount");
                g.put(&node, &ag("amount"), amount.clone());
                put_price(&mut g, &amount, price);
            }
            ObligationKind::Refund { price, to } => {
                g.put_type(&node, &ag("RefundObligation"));
                g.put(&node, &ag("creditor"), to.clone());
                let amount = node.derive("-amount");
                g.put(&node, &ag("amount"), amount.clone());
                put_price(&mut g, &amount, price);
            }
        }
        g.put(&node, &ag("firedBy"), o.source_conditional.clone());
        g.put_literal(
            &node,
            &ag("firingKey"),
            Literal::string(o.firing_key.to_hex()),
        );
        g.put_literal(&node, &ag("createdAtSeq"), count(o.created_at_seq));
    }
    g
}

/// SHA-256 of the Turtle serialization of [`export_abox`].
pub fn state_digest(state: &LedgerState) -> [u8; 32] {
    Sha256::digest(serialize_turtle(&export_abox(state)).as_bytes()).into()
}
