// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over the agreementforge ledger, engine and Turtle tools.
//!
//! Every function returns an [`AfStatus`]. On failure a message is kept per
//! thread and can be read with `af_last_error`. Strings handed out by the
//! library must be released with `af_string_free`; handles with their own
//! `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use agreementforge::app::{self, evaluate_and_record};
use agreementforge::contract::{ContractError, Timestamp};
use agreementforge::demo::{seed_demo, StepClock};
use agreementforge::ledger::{self, export_abox, state_digest, Command, Ledger, LedgerError};
use agreementforge::ns;
use agreementforge::query::{answer_table, QueryError};
use agreementforge::rdf::{self, Graph, RdfError};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Rdf = 4,
    Contract = 5,
    Engine = 6,
    Capacity = 7,
    EventOrder = 8,
    UnknownRef = 9,
    Validation = 10,
    Duplicate = 11,
    Integrity = 12,
    Io = 13,
    Locked = 14,
    NotFound = 15,
    Panic = 99,
}

/// Handle to an in-memory ledger.
pub struct AfLedger {
    inner: Ledger,
}

/// Handle to a parsed RDF graph.
pub struct AfGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AfStatus, String);

type Res<T> = Result<T, Failure>;

fn fail(status: AfStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

impl From<LedgerError> for Failure {
    fn from(e: LedgerError) -> Self {
        let status = match &e {
            LedgerError::Capacity(_) => AfStatus::Capacity,
            LedgerError::EventOrder(_) => AfStatus::EventOrder,
            LedgerError::UnknownRef(_) => AfStatus::UnknownRef,
            LedgerError::Validation(_) => AfStatus::Validation,
            LedgerError::Duplicate(_) => AfStatus::Duplicate,
            LedgerError::Integrity { .. } => AfStatus::Integrity,
            LedgerError::Io(_) => AfStatus::Io,
            LedgerError::Locked(_) => AfStatus::Locked,
        };
        Failure(status, e.to_string())
    }
}

impl From<RdfError> for Failure {
    fn from(e: RdfError) -> Self {
        Failure(AfStatus::Rdf, e.to_string())
    }
}

impl From<ContractError> for Failure {
    fn from(e: ContractError) -> Self {
        Failure(AfStatus::Contract, e.to_string())
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        let status = match &e {
            QueryError::NotFound(_) => AfStatus::NotFound,
            QueryError::Integrity(_) => AfStatus::Integrity,
            QueryError::Invalid(_) => AfStatus::InvalidArgument,
            QueryError::Contract(_) => AfStatus::Contract,
        };
        Failure(status, e.to_string())
    }
}

impl From<app::Error> for Failure {
    fn from(e: app::Error) -> Self {
        match e {
            app::Error::Rdf(e) => e.into(),
            app::Error::Contract(e) => e.into(),
            app::Error::Engine(e) => Failure(AfStatus::Engine, e.to_string()),
            app::Error::Ledger(e) => e.into(),
            app::Error::Query(e) => e.into(),
            app::Error::Usage(m) => Failure(AfStatus::InvalidArgument, m),
        }
    }
}

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Res<()>) -> AfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            AfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(Some(msg));
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(Some(format!("internal panic: {msg}")));
            AfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(fail(AfStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(AfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn bytes<'a>(p: *const u8, len: usize, what: &str) -> Res<&'a [u8]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(AfStatus::NullArgument, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| fail(AfStatus::NullArgument, format!("{what} is null")))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &str) -> Res<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| fail(AfStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Res<()> {
    if out.is_null() {
        return Err(fail(AfStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err(fail(AfStatus::NullArgument, "output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| fail(AfStatus::InvalidArgument, "output has NUL"))?;
    out.write(c.into_raw());
    Ok(())
}

/// Null means the current time.
unsafe fn timestamp(p: *const c_char) -> Res<Timestamp> {
    if p.is_null() {
        return Ok(Timestamp::now());
    }
    Ok(Timestamp::parse(text(p, "timestamp")?)?)
}

fn iri(s: &str) -> Res<rdf::Iri> {
    ns::expand(s).ok_or_else(|| fail(AfStatus::InvalidArgument, format!("not an IRI: {s}")))
}

fn new_ledger(out: *mut *mut AfLedger, inner: Ledger) -> Res<()> {
    unsafe { put(out, Box::into_raw(Box::new(AfLedger { inner })), "out") }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn af_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn af_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn af_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Empty ledger, not backed by a file.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_new(out: *mut *mut AfLedger) -> AfStatus {
    guard(|| new_ledger(out, Ledger::new()))
}

/// Creates a new log file at `path`. Fails if it exists.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_create(
    path: *const c_char,
    out: *mut *mut AfLedger,
) -> AfStatus {
    guard(|| {
        let path = text(path, "path")?;
        new_ledger(out, Ledger::create(Path::new(path))?)
    })
}

/// Opens and verifies the log file at `path`. Appends write through.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_open(path: *const c_char, out: *mut *mut AfLedger) -> AfStatus {
    guard(|| {
        let path = text(path, "path")?;
        new_ledger(out, Ledger::open(Path::new(path))?)
    })
}

/// Verifies and replays a log held in memory.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_from_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut AfLedger,
) -> AfStatus {
    guard(|| {
        let log = bytes(data, len, "data")?;
        new_ledger(out, Ledger::from_bytes(log)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_ledger_free(ledger: *mut AfLedger) {
    if !ledger.is_null() {
        drop(Box::from_raw(ledger));
    }
}

/// Number of records, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_len(ledger: *const AfLedger) -> u64 {
    ledger
        .as_ref()
        .map_or(0, |l| l.inner.records().len() as u64)
}

#[no_mangle]
pub unsafe extern "C" fn af_ledger_head_hash(
    ledger: *const AfLedger,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let l = handle(ledger, "ledger")?;
        put_string(out, l.inner.head_hash().to_string())
    })
}

/// The log as JSON lines.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_log(ledger: *const AfLedger, out: *mut *mut c_char) -> AfStatus {
    guard(|| {
        let l = handle(ledger, "ledger")?;
        let log = String::from_utf8(l.inner.to_bytes())
            .map_err(|_| fail(AfStatus::Integrity, "log is not UTF-8"))?;
        put_string(out, log)
    })
}

/// Appends one command given as JSON, e.g. `{"type":"register_operator",...}`.
/// `timestamp` may be null for the current time. `out_seq` may be null.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_append_json(
    ledger: *mut AfLedger,
    command_json: *const c_char,
    timestamp_text: *const c_char,
    out_seq: *mut u64,
) -> AfStatus {
    guard(|| {
        let l = handle_mut(ledger, "ledger")?;
        let json = text(command_json, "command")?;
        let cmd: Command = serde_json::from_str(json)
            .map_err(|e| fail(AfStatus::InvalidArgument, format!("bad command: {e}")))?;
        let ts = timestamp(timestamp_text)?;
        let seq = l.inner.append(cmd, ts)?.seq;
        if !out_seq.is_null() {
            out_seq.write(seq);
        }
        Ok(())
    })
}

/// Appends the demonstration scenario, one second per record from `start`
/// (null for the built-in start time).
#[no_mangle]
pub unsafe extern "C" fn af_ledger_seed_demo(
    ledger: *mut AfLedger,
    start: *const c_char,
) -> AfStatus {
    guard(|| {
        let l = handle_mut(ledger, "ledger")?;
        let start = if start.is_null() {
            Timestamp::parse(agreementforge::demo::DEMO_START)?
        } else {
            timestamp(start)?
        };
        seed_demo(&mut l.inner, &mut StepClock::starting_at(&start))?;
        Ok(())
    })
}

/// Evaluates all contracts, records new obligations and returns them as a
/// JSON array.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_evaluate(
    ledger: *mut AfLedger,
    now: *const c_char,
    out_json: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let l = handle_mut(ledger, "ledger")?;
        let now = timestamp(now)?;
        if out_json.is_null() {
            return Err(fail(AfStatus::NullArgument, "out_json is null"));
        }
        let fresh = evaluate_and_record(&mut l.inner, &now)?;
        let json = serde_json::to_string(&fresh)
            .map_err(|e| fail(AfStatus::Panic, format!("serialize: {e}")))?;
        put_string(out_json, json)
    })
}

/// The derived A-Box as Turtle.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_export_turtle(
    ledger: *const AfLedger,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let l = handle(ledger, "ledger")?;
        put_string(out, rdf::serialize_turtle(&export_abox(l.inner.state())))
    })
}

/// Hex SHA-256 over the replayed state.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_state_digest(
    ledger: *const AfLedger,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let l = handle(ledger, "ledger")?;
        let hex: String = state_digest(l.inner.state())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        put_string(out, hex)
    })
}

/// Answers competency question `question` ("cq1".."cq6") about `subject`
/// (IRI or CURIE) over the exported A-Box. Text table unless `csv`.
#[no_mangle]
pub unsafe extern "C" fn af_ledger_query(
    ledger: *const AfLedger,
    question: *const c_char,
    subject: *const c_char,
    csv: bool,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let l = handle(ledger, "ledger")?;
        let q = text(question, "question")?;
        let s = iri(text(subject, "subject")?)?;
        let table = answer_table(&export_abox(l.inner.state()), q, &s)?;
        put_string(
            out,
            if csv {
                table.render_csv()
            } else {
                table.render_text()
            },
        )
    })
}

/// Checks a log without building state. On an integrity failure the
/// offending record number goes to `out_failed_seq`. Either output may be
/// null.
#[no_mangle]
pub unsafe extern "C" fn af_verify_chain(
    data: *const u8,
    len: usize,
    out_records: *mut u64,
    out_failed_seq: *mut u64,
) -> AfStatus {
    guard(|| {
        let log = bytes(data, len, "data")?;
        match ledger::verify_chain(log) {
            Ok(records) => {
                if !out_records.is_null() {
                    out_records.write(records.len() as u64);
                }
                Ok(())
            }
            Err(f) => {
                if !out_failed_seq.is_null() {
                    out_failed_seq.write(f.seq);
                }
                Err(fail(
                    AfStatus::Integrity,
                    format!("record {}: {}", f.seq, f.reason),
                ))
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_graph_parse_turtle(
    turtle: *const c_char,
    out: *mut *mut AfGraph,
) -> AfStatus {
    guard(|| {
        let g = rdf::parse_turtle(text(turtle, "turtle")?)?;
        put(out, Box::into_raw(Box::new(AfGraph { inner: g })), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_graph_free(graph: *mut AfGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

#[no_mangle]
pub unsafe extern "C" fn af_graph_len(graph: *const AfGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.len() as u64)
}

#[no_mangle]
pub unsafe extern "C" fn af_graph_serialize(
    graph: *const AfGraph,
    out: *mut *mut c_char,
) -> AfStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        put_string(out, rdf::serialize_turtle(&g.inner))
    })
}

#[no_mangle]
pub unsafe extern "C" fn af_graph_isomorphic(
    a: *const AfGraph,
    b: *const AfGraph,
    out: *mut bool,
) -> AfStatus {
    guard(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        put(out, rdf::isomorphic(&a.inner, &b.inner)?, "out")
    })
}
