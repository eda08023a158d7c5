// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use agreementforge::app::evaluate_and_record;
use agreementforge::contract::ridesharing_booking_contract;
use agreementforge::demo::{booking, register, seed_demo, StepClock};
use agreementforge::ledger::{
    canonical_json, replay, state_digest, verify_chain, Command, DirLock, Ledger, LedgerError,
    LedgerRecord, LedgerState, GENESIS_PREV,
};
use agreementforge::ns::{ag, rbe};

use common::{eur, random_fixture, ts};

fn demo_ledger() -> Ledger {
    let mut ledger = Ledger::new();
    let mut clock = StepClock::default();
    seed_demo(&mut ledger, &mut clock).unwrap();
    evaluate_and_record(&mut ledger, &clock.tick()).unwrap();
    ledger
}

#[test]
fn canonical_json_sorts_keys_without_whitespace() {
    let v: serde_json::Value =
        serde_json::from_str(r#"{"b": [1, {"z": null, "a": "é\n"}], "a": true}"#).unwrap();
    assert_eq!(
        canonical_json(&v),
        r#"{"a":true,"b":[1,{"a":"é\n","z":null}]}"#
    );
}

#[test]
fn first_record_links_to_genesis() {
    let ledger = demo_ledger();
    let first = &ledger.records()[0];
    assert_eq!(first.prev, GENESIS_PREV);
    assert_eq!(first.prev.len(), 64);
    let again = LedgerRecord::new(1, first.ts.clone(), first.payload.clone(), GENESIS_PREV);
    assert_eq!(&again, first);
}

#[test]
fn demo_log_verifies_and_replays_identically() {
    let ledger = demo_ledger();
    let bytes = ledger.to_bytes();
    assert_eq!(verify_chain(&bytes).unwrap().len(), ledger.records().len());
    let a = Ledger::from_bytes(&bytes).unwrap();
    let b = Ledger::from_bytes(&bytes).unwrap();
    assert_eq!(state_digest(a.state()), state_digest(b.state()));
    assert_eq!(a.state(), ledger.state());
}

#[test]
fn every_byte_of_a_record_is_covered() {
    let bytes = demo_ledger().to_bytes();
    let starts: Vec<usize> = std::iter::once(0)
        .chain(
            bytes
                .iter()
                .enumerate()
                .filter(|(_, b)| **b == b'\n')
                .map(|(i, _)| i + 1),
        )
        .collect();
    // Record 3, including its trailing line feed.
    let (lo, hi) = (starts[2], starts[3]);
    for i in lo..hi {
        for replacement in [b'0', b' ', 0xff] {
            if bytes[i] == replacement {
                continue;
            }
            let mut m = bytes.clone();
            m[i] = replacement;
            let failure = verify_chain(&m).expect_err("mutation must be detected");
            assert!(failure.seq <= 3, "byte {i}: detected at {}", failure.seq);
        }
    }
}

#[test]
fn truncation_and_missing_newline_are_detected() {
    let bytes = demo_ledger().to_bytes();
    assert!(verify_chain(&bytes[..bytes.len() - 1]).is_err());
    let cut = bytes.iter().position(|b| *b == b'\n').unwrap() + 1;
    // Dropping record 1 breaks the sequence at the first line.
    assert_eq!(verify_chain(&bytes[cut..]).unwrap_err().seq, 1);
}

#[test]
fn rejected_commands_leave_no_record() {
    let mut ledger = demo_ledger();
    let now = ts("2024-05-02T00:00:00Z");
    let before = ledger.to_bytes();
    let event = |b: &str, e: &str| Command::RecordEvent {
        booking: ag(b),
        event: rbe(e),
    };
    let rejected = [
        (event("b2", "RidesharingCompleted"), "EVENT_ORDER"),
        (event("nope", "RidesharingStarted"), "UNKNOWN_REF"),
        (event("b2", "NotAnEvent"), "VALIDATION"),
        (register(&ridesharing_booking_contract()), "DUPLICATE"),
    ];
    for (cmd, code) in rejected {
        assert_eq!(ledger.append(cmd, now.clone()).unwrap_err().code(), code);
    }
    assert_eq!(ledger.to_bytes(), before);

    // Two of three seats are taken; a third booking fits, a fourth does not.
    let seat = |b: &str, p: &str| booking(&ag(b), &ag(p), &ag("ride1"), eur(10), ("x", "y"), None);
    ledger.append(seat("b9", "p1"), now.clone()).unwrap();
    let full = ledger.append(seat("b10", "p2"), now).unwrap_err();
    assert!(matches!(full, LedgerError::Capacity(_)), "{full}");
}

#[test]
fn state_machine_blocks_pay_and_refund_together() {
    let mut ledger = demo_ledger();
    // b1 is completed; a cancellation cannot follow.
    let err = ledger
        .append(
            Command::RecordEvent {
                booking: ag("b1"),
                event: rbe("RidesharingCancelledByDriver"),
            },
            ts("2024-05-02T00:00:00Z"),
        )
        .unwrap_err();
    assert_eq!(err.code(), "EVENT_ORDER");
}

#[test]
fn capacity_holds_at_every_prefix() {
    for seed in 0..20 {
        let bytes = random_fixture(seed).to_bytes();
        let records = verify_chain(&bytes).unwrap();
        // Applying one record at a time visits the state of every prefix.
        let mut state = LedgerState::default();
        for r in &records {
            state.apply(r.seq, &r.ts, &r.payload).unwrap();
            for (ride, alloc) in &state.rides {
                assert!(
                    state.reserved_seats(ride) <= alloc.allocated_seats,
                    "seed {seed} seq {}",
                    r.seq
                );
            }
        }
        assert_eq!(state, replay(&records).unwrap());
    }
}

#[test]
fn file_backed_ledger_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.jsonl");
    let mut ledger = Ledger::create(&path).unwrap();
    seed_demo(&mut ledger, &mut StepClock::default()).unwrap();
    let reopened = Ledger::open(&path).unwrap();
    assert_eq!(reopened.head_hash(), ledger.head_hash());
    assert_eq!(std::fs::read(&path).unwrap(), ledger.to_bytes());
    assert!(Ledger::create(&path).is_err());
}

#[test]
fn lock_is_exclusive_until_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let lock = DirLock::acquire(dir.path()).unwrap();
    assert_eq!(DirLock::acquire(dir.path()).unwrap_err().code(), "LOCKED");
    drop(lock);
    DirLock::acquire(dir.path()).unwrap();
}
