// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! The ride-sharing agreements: the booking contract, three example
//! booking conditionals and the three incentives.

use super::{
    Conditional, ConditionalAtom, Constraint, ContractError, ContractKind, Entry, EntryTemplate,
    Operand, OperatorArg, Percentage, SmartContract, VoucherKind, VoucherSpec,
};
use crate::ns::{ag, osdm, owl, r2r, rbe, tmorg};
use crate::rdf::Literal;

fn booking_entries() -> Vec<Entry> {
    vec![
        Entry::participant("driver", EntryTemplate::of(r2r("Driver"))),
        Entry::participant("passenger", EntryTemplate::of(osdm("Passenger"))),
        Entry::value(
            "booking",
            EntryTemplate::of(r2r("RidesharingBooking"))
                .with(Constraint::entry(r2r("bookedBy"), "passenger"))
                .with(Constraint::entry(r2r("hasOfferItem"), "offerItem")),
        ),
        Entry::value(
            "offerItem",
            EntryTemplate::of(r2r("OfferItem"))
                .with(Constraint::entry(r2r("hasPrice"), "price"))
                .with(Constraint::entry(r2r("forTravelEpisode"), "leg"))
                .with(Constraint::entry(r2r("includesReservation"), "reservation")),
        ),
        Entry::value("price", EntryTemplate::of(osdm("Price"))),
        Entry::value(
            "leg",
            EntryTemplate::of(r2r("RidesharingLeg"))
                .with(Constraint::entry(r2r("hasTransportationService"), "ride")),
        ),
        Entry::value(
            "reservation",
            EntryTemplate::of(r2r("InventoryReservation"))
                .with(Constraint::term(r2r("consumable"), r2r("Seat"))),
        ),
        Entry::value(
            "ride",
            EntryTemplate::of(r2r("Ride"))
                .with(Constraint::entry(r2r("operatedBy"), "driver"))
                .with(Constraint::entry(
                    r2r("hasInventoryAllocation"),
                    "allocation",
                )),
        ),
        Entry::value(
            "allocation",
            EntryTemplate::of(r2r("InventoryAllocation"))
                .with(Constraint::term(r2r("consumable"), r2r("Seat"))),
        ),
    ]
}

/// Driver and passenger around a ridesharing booking, with the offer item,
/// price, leg, reservation, ride and allocation as value entries. It carries
/// no conditionals.
pub fn ridesharing_booking_contract() -> SmartContract {
    SmartContract {
        id: ag("RidesharingBookingSmartContract"),
        label: "Ridesharing booking smart contract".into(),
        kind: ContractKind::Generic,
        entries: booking_entries(),
        conditionals: Vec::new(),
    }
}

fn associated_with(concept: &str) -> ConditionalAtom {
    ConditionalAtom::new(
        vec![Operand::entry("booking")],
        ag("isAssociatedWith"),
        vec![Operand::Iri(rbe(concept))],
    )
}

/// Pay-on-completion and the two driver-fault refund policies.
pub fn example_conditionals() -> Vec<Conditional> {
    let mut pay = ConditionalAtom::new(
        vec![Operand::entry("passenger")],
        ag("pay"),
        vec![Operand::entry("driver")],
    );
    pay.input_params.push("price".into());

    let refund = || {
        let mut atom =
            ConditionalAtom::new(vec![], ag("refund"), vec![Operand::entry("passenger")]);
        atom.output_params.push("price".into());
        atom
    };

    vec![
        Conditional {
            id: ag("RidesharingPaymentConditional"),
            body: vec![
                associated_with("RidesharingStarted"),
                associated_with("RidesharingCompleted"),
            ],
            head: vec![pay],
        },
        Conditional {
            id: ag("RidesharingDriverCancellationConditional"),
            body: vec![associated_with("RidesharingCancelledByDriver")],
            head: vec![refund()],
        },
        Conditional {
            id: ag("RidesharingDriverNoShowConditional"),
            body: vec![associated_with("RidesharingNoShowDriver")],
            head: vec![refund()],
        },
    ]
}

/// The booking contract with [`example_conditionals`] attached, so the
/// payment and refund policies can be executed.
pub fn booking_contract_with_examples() -> SmartContract {
    SmartContract {
        id: ag("RidesharingBookingPolicySmartContract"),
        label: "Ridesharing booking with payment and refund policies".into(),
        kind: ContractKind::Generic,
        entries: booking_entries(),
        conditionals: example_conditionals(),
    }
}

fn incentive_participants(passenger: &str) -> Vec<Entry> {
    vec![
        Entry::participant(passenger, EntryTemplate::of(osdm("Passenger"))),
        Entry::participant("tsp", EntryTemplate::of(tmorg("Operator"))),
    ]
}

fn issue(voucher: VoucherSpec) -> ConditionalAtom {
    ConditionalAtom::new(
        vec![Operand::entry(&voucher.issuer)],
        r2r("issue"),
        vec![Operand::template("voucher", voucher.template())],
    )
}

/// Seat upgrade for a passenger sharing a ride with another passenger.
pub fn ride_with_other_passengers_incentive() -> SmartContract {
    let id = ag("RideWithOtherPassengersIncentive");
    let other =
        EntryTemplate::of(osdm("Passenger")).with(Constraint::entry(owl("differentFrom"), "p1"));
    let body = ConditionalAtom::new(
        vec![Operand::entry("p1"), Operand::template("P2", other)],
        r2r("book"),
        vec![Operand::template("R1", EntryTemplate::of(r2r("Ride")))],
    );
    let head = issue(VoucherSpec {
        kind: VoucherKind::SeatUpgrade,
        beneficiary: "p1".into(),
        issuer: "tsp".into(),
    });
    SmartContract {
        conditionals: vec![Conditional {
            id: id.derive("-conditional"),
            body: vec![body],
            head: vec![head],
        }],
        id,
        label: "Ride with other passengers incentive".into(),
        kind: ContractKind::Incentive,
        entries: incentive_participants("p1"),
    }
}

/// Template matching an offer whose trip mixes a ridesharing leg with at
/// least one other travel episode.
fn multimodal_offer() -> EntryTemplate {
    EntryTemplate::of(osdm("Offer"))
        .with(Constraint::term(
            ag("includesEpisodeOfType"),
            r2r("RidesharingLeg"),
        ))
        .with(Constraint::term(
            ag("includesEpisodeNotOfType"),
            r2r("RidesharingLeg"),
        ))
}

/// Discount voucher for booking a multimodal offer, optionally only every
/// `repetitions` bookings. `(10%, 1)` and `(20%, 3)` give the two published
/// incentives.
pub fn multimodal_discount_incentive(
    percentage: Percentage,
    repetitions: u32,
) -> Result<SmartContract, ContractError> {
    if repetitions == 0 {
        return Err(ContractError::Validation(
            "repetitions must be at least 1".into(),
        ));
    }
    let (id, label) = if repetitions == 1 {
        (
            ag("MultimodalDiscountIncentive"),
            "Multimodal discount incentive".to_string(),
        )
    } else {
        (
            ag(&format!("MultimodalDiscountIncentive{repetitions}")),
            format!("Multimodal repetition discount incentive ({repetitions} times)"),
        )
    };
    let mut body = ConditionalAtom::new(
        vec![Operand::entry("passenger")],
        r2r("book"),
        vec![Operand::template("offer", multimodal_offer())],
    );
    if repetitions > 1 {
        body.operator_args.push(OperatorArg {
            key: "times".into(),
            value: Literal::integer(i64::from(repetitions)),
        });
    }
    let head = issue(VoucherSpec {
        kind: VoucherKind::Discount(percentage),
        beneficiary: "passenger".into(),
        issuer: "tsp".into(),
    });
    Ok(SmartContract {
        conditionals: vec![Conditional {
            id: id.derive("-conditional"),
            body: vec![body],
            head: vec![head],
        }],
        id,
        label,
        kind: ContractKind::Incentive,
        entries: incentive_participants("passenger"),
    })
}

/// The booking contract followed by the three incentives.
pub fn published_contracts() -> Vec<SmartContract> {
    vec![
        ridesharing_booking_contract(),
        ride_with_other_passengers_incentive(),
        multimodal_discount_incentive(Percentage::whole(10).expect("valid"), 1).expect("valid"),
        multimodal_discount_incentive(Percentage::whole(20).expect("valid"), 3).expect("valid"),
    ]
}
