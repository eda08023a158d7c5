// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{Command, LedgerError, LedgerState};
use crate::contract::Timestamp;

pub const GENESIS_PREV: &str = "0000000000000000000000000000000000000000000000000000000000000000";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerRecord {
    pub seq: u64,
    pub ts: Timestamp,
    pub payload: Command,
    pub prev: String,
    pub hash: String,
}

/// JSON with object keys sorted and no insignificant whitespace.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn canonical_payload(cmd: &Command) -> String {
    canonical_json(&serde_json::to_value(cmd).expect("commands serialize"))
}

/// `SHA-256(prev ‖ seq ‖ ts ‖ payload)` as lowercase hex.
pub fn record_hash(prev: &str, seq: u64, ts: &Timestamp, payload: &Command) -> String {
    let mut h = Sha256::new();
    h.update(prev.as_bytes());
    h.update(seq.to_string().as_bytes());
    h.update(ts.as_str().as_bytes());
    h.update(canonical_payload(payload).as_bytes());
    hex::encode(h.finalize())
}

impl LedgerRecord {
    pub fn new(seq: u64, ts: Timestamp, payload: Command, prev: &str) -> Self {
        let hash = record_hash(prev, seq, &ts, &payload);
        LedgerRecord {
            seq,
            ts,
            payload,
            prev: prev.to_string(),
            hash,
        }
    }

    /// The record's line in the log, without the trailing LF.
    pub fn to_line(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("records serialize"))
    }
}

/// First record that fails verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFailure {
    pub seq: u64,
    pub reason: String,
}

/// Parses and checks a whole log: every line canonical, seqs consecutive
/// from 1, each `prev` equal to the preceding hash, each hash recomputing.
pub fn verify_chain(log: &[u8]) -> Result<Vec<LedgerRecord>, ChainFailure> {
    let mut records = Vec::new();
    if log.is_empty() {
        return Ok(records);
    }
    let body = log.strip_suffix(b"\n");
    let mut prev = GENESIS_PREV.to_string();
    for (i, raw) in body.unwrap_or(log).split(|b| *b == b'\n').enumerate() {
        let seq = i as u64 + 1;
        let fail = |reason: &str| ChainFailure {
            seq,
            reason: reason.to_string(),
        };
        let line = std::str::from_utf8(raw).map_err(|_| fail("line is not UTF-8"))?;
        let value: Value =
            serde_json::from_str(line).map_err(|e| fail(&format!("bad JSON: {e}")))?;
        let record: LedgerRecord =
            serde_json::from_value(value).map_err(|e| fail(&format!("bad record: {e}")))?;
        if record.seq != seq {
            return Err(fail(&format!(
                "sequence number {} out of order",
                record.seq
            )));
        }
        if record.prev != prev {
            return Err(fail("prev does not match the preceding hash"));
        }
        if record.hash != record_hash(&record.prev, record.seq, &record.ts, &record.payload) {
            return Err(fail("hash does not match record contents"));
        }
        if record.to_line() != line {
            return Err(fail("record is not in canonical form"));
        }
        prev = record.hash.clone();
        records.push(record);
    }
    if body.is_none() {
        return Err(ChainFailure {
            seq: records.len() as u64,
            reason: "log does not end with a line feed".into(),
        });
    }
    Ok(records)
}

/// Applies records in order to an empty state.
pub fn replay(records: &[LedgerRecord]) -> Result<LedgerState, LedgerError> {
    let mut state = LedgerState::default();
    for r in records {
        state
            .apply(r.seq, &r.ts, &r.payload)
            .map_err(|e| LedgerError::Integrity {
                seq: r.seq,
                reason: format!("replay rejected record: {e}"),
            })?;
    }
    Ok(state)
}

/// An append-only log with its replayed state, optionally backed by a file.
#[derive(Debug, Clone, Default)]
pub struct Ledger {
    records: Vec<LedgerRecord>,
    state: LedgerState,
    file: Option<PathBuf>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    /// Verifies and replays a serialized log.
    pub fn from_bytes(log: &[u8]) -> Result<Self, LedgerError> {
        let records = verify_chain(log).map_err(|f| LedgerError::Integrity {
            seq: f.seq,
            reason: f.reason,
        })?;
        let state = replay(&records)?;
        Ok(Ledger {
            records,
            state,
            file: None,
        })
    }

    /// Creates an empty log file; fails if it exists.
    pub fn create(path: &Path) -> Result<Self, LedgerError> {
        OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(path)
            .map_err(|e| LedgerError::Io(format!("{}: {e}", path.display())))?;
        Ok(Ledger {
            file: Some(path.to_path_buf()),
            ..Ledger::default()
        })
    }

    pub fn open(path: &Path) -> Result<Self, LedgerError> {
        let bytes =
            fs::read(path).map_err(|e| LedgerError::Io(format!("{}: {e}", path.display())))?;
        let mut ledger = Ledger::from_bytes(&bytes)?;
        ledger.file = Some(path.to_path_buf());
        Ok(ledger)
    }

    pub fn records(&self) -> &[LedgerRecord] {
        &self.records
    }

    pub fn state(&self) -> &LedgerState {
        &self.state
    }

    pub fn head_hash(&self) -> &str {
        self.records
            .last()
            .map_or(GENESIS_PREV, |r| r.hash.as_str())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for r in &self.records {
            out.extend_from_slice(r.to_line().as_bytes());
            out.push(b'\n');
        }
        out
    }

    /// Validates `cmd` against the current state, then persists it.
    pub fn append(&mut self, cmd: Command, now: Timestamp) -> Result<&LedgerRecord, LedgerError> {
        let seq = self.records.len() as u64 + 1;
        let mut next = self.state.clone();
        next.apply(seq, &now, &cmd)?;
        let record = LedgerRecord::new(seq, now, cmd, self.head_hash());
        if let Some(path) = &self.file {
            let mut f = OpenOptions::new()
                .append(true)
                .open(path)
                .map_err(|e| LedgerError::Io(format!("{}: {e}", path.display())))?;
            let mut line = record.to_line();
            line.push('\n');
            f.write_all(line.as_bytes())
                .and_then(|_| f.sync_data())
                .map_err(|e| LedgerError::Io(format!("{}: {e}", path.display())))?;
        }
        self.state = next;
        self.records.push(record);
        Ok(self.records.last().expect("just pushed"))
    }
}
