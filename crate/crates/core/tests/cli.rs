// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use agreementforge::ledger::{DirLock, LOG_FILE};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn af(dir: &Path, args: &[&str]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_agreementforge"));
    cmd.current_dir(dir).args(args);
    for key in ["AF_LEDGER_DIR", "AF_DEFAULT_CURRENCY", "AF_CLOCK"] {
        cmd.env_remove(key);
    }
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let r = af(dir, args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout
}

#[test]
fn demo_evaluates_once() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(ok(d, &["demo"]), "seeded 18 records\n");
    let first = ok(d, &["evaluate", "--now", "2024-05-01T09:00:00Z"]);
    assert!(first.ends_with("4 new obligations\n"), "{first}");
    assert!(first.contains("pay 1500 EUR: ag:p1 -> ag:d1"), "{first}");
    assert_eq!(
        ok(d, &["evaluate", "--now", "2024-05-01T09:01:00Z"]),
        "0 new obligations\n"
    );
    assert!(ok(d, &["verify"]).starts_with("ok: 22 records, head "));
}

#[test]
fn queries_render_tables_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["demo"]);
    let text = ok(d, &["query", "cq2", "--booking", "ag:b1"]);
    assert_eq!(
        text.lines()
            .nth(2)
            .unwrap()
            .split_whitespace()
            .collect::<Vec<_>>(),
        ["1500", "EUR"]
    );
    let csv = ok(d, &["query", "cq1", "--booking", "ag:b1", "--csv"]);
    assert_eq!(csv, "origin,destination\r\nstop:A,stop:B\r\n");
    let missing = af(d, &["query", "cq2", "--booking", "ag:nobody"]);
    assert_eq!(missing.code, 2, "{}", missing.stderr);
}

#[test]
fn tampered_log_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["demo", "--evaluate"]);
    let path = d.join(LOG_FILE);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut tampered = lines.clone();
    let edited = lines[8].replacen("p2", "p9", 1);
    assert_ne!(edited, lines[8]);
    tampered[8] = &edited;
    std::fs::write(&path, tampered.join("\n") + "\n").unwrap();

    let r = af(d, &["verify"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("record 9"), "{}", r.stderr);
    // Reading commands refuse a broken chain too.
    assert_eq!(af(d, &["evaluate"]).code, 3);
}

#[test]
fn exit_codes_separate_usage_from_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(af(d, &["no-such-command"]).code, 1);
    assert_eq!(af(d, &["book", "--booking", "ag:b1"]).code, 1);
    assert_eq!(af(d, &["demo", "--now", "yesterday"]).code, 1);
    ok(d, &["demo"]);
    assert_eq!(
        af(
            d,
            &[
                "event",
                "--booking",
                "not a curie",
                "--event",
                "rbe:RidesharingStarted"
            ]
        )
        .code,
        1
    );
    let r = af(
        d,
        &[
            "event",
            "--booking",
            "ag:b2",
            "--event",
            "rbe:RidesharingCompleted",
        ],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error: EVENT_ORDER"), "{}", r.stderr);
    assert_eq!(af(d, &["init"]).code, 2);
}

#[test]
fn writers_are_locked_out() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["init"]);
    let lock = DirLock::acquire(d).unwrap();
    let r = af(d, &["register-operator", "ag:tsp9"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("LOCKED"), "{}", r.stderr);
    // Readers are not blocked.
    ok(d, &["verify"]);
    drop(lock);
    assert!(ok(d, &["register-operator", "ag:tsp9"]).starts_with("record 1 "));
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("agreementforge.toml"),
        "ledger_dir = \"state\"\nclock = \"2030-01-01T00:00:00Z\"\n",
    )
    .unwrap();
    ok(d, &["init"]);
    assert!(d.join("state").join(LOG_FILE).exists());
    ok(d, &["register-operator", "ag:tsp1"]);
    let log = std::fs::read_to_string(d.join("state").join(LOG_FILE)).unwrap();
    assert!(log.contains("2030-01-01T00:00:00Z"), "{log}");

    std::fs::write(d.join("agreementforge.toml"), "colour = \"blue\"\n").unwrap();
    assert_eq!(af(d, &["verify"]).code, 1);
}

#[test]
fn emitted_ontology_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let summary = ok(d, &["emit-ontology", "--out", "a"]);
    assert_eq!(summary.lines().count(), 3);
    ok(d, &["emit-ontology", "--out", "b"]);
    for name in ["terms.ttl", "rb-events.ttl", "agreements.ttl"] {
        let a = std::fs::read(d.join("a").join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, std::fs::read(d.join("b").join(name)).unwrap(), "{name}");
    }
}

#[test]
fn hand_written_booking_flow() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let contracts = d.join("contracts");
    ok(d, &["emit-ontology", "--out", contracts.to_str().unwrap()]);
    ok(d, &["init"]);
    // One contract per registration; agreements.ttl holds several.
    let r = af(
        d,
        &[
            "register-contract",
            contracts.join("agreements.ttl").to_str().unwrap(),
        ],
    );
    assert_eq!(r.code, 2);
    ok(
        d,
        &[
            "record-ride",
            "--ride",
            "ag:r1",
            "--driver",
            "ag:d1",
            "--seats",
            "1",
        ],
    );
    ok(
        d,
        &[
            "book",
            "--booking",
            "ag:b1",
            "--passenger",
            "ag:p1",
            "--ride",
            "ag:r1",
            "--price",
            "900",
            "--origin",
            "X",
            "--destination",
            "Y",
        ],
    );
    let full = af(
        d,
        &[
            "book",
            "--booking",
            "ag:b2",
            "--passenger",
            "ag:p2",
            "--ride",
            "ag:r1",
            "--price",
            "900",
            "--origin",
            "X",
            "--destination",
            "Y",
        ],
    );
    assert_eq!(full.code, 2);
    assert!(full.stderr.contains("CAPACITY"), "{}", full.stderr);
    let rows = ok(d, &["query", "cq3", "--ride", "ag:r1", "--csv"]);
    assert_eq!(rows, "seats\r\n1\r\n");
}
