// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Append-only, hash-chained command log. All state, and the exported
//! A-Box, is derived by replaying it.

mod chain;
mod command;
mod export;
mod state;

use std::fs::{self, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use chain::{
    canonical_json, canonical_payload, record_hash, replay, verify_chain, ChainFailure, Ledger,
    LedgerRecord, GENESIS_PREV,
};
pub use command::{Command, Episode};
pub use export::{allocation_node, booking_nodes, export_abox, state_digest, BookingNodes};
pub use state::{next_status, BookingRecord, BookingStatus, EventRecord, LedgerState, RideRecord};

use crate::contract::ContractError;

pub const LOG_FILE: &str = "ledger.jsonl";
pub const LOCK_FILE: &str = "ledger.lock";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("CAPACITY: {0}")]
    Capacity(String),
    #[error("EVENT_ORDER: {0}")]
    EventOrder(String),
    #[error("UNKNOWN_REF: {0}")]
    UnknownRef(String),
    #[error("VALIDATION: {0}")]
    Validation(String),
    #[error("DUPLICATE: {0}")]
    Duplicate(String),
    #[error("INTEGRITY: record {seq}: {reason}")]
    Integrity { seq: u64, reason: String },
    #[error("IO: {0}")]
    Io(String),
    #[error("LOCKED: {0}")]
    Locked(String),
}

impl LedgerError {
    pub fn code(&self) -> &'static str {
        match self {
            LedgerError::Capacity(_) => "CAPACITY",
            LedgerError::EventOrder(_) => "EVENT_ORDER",
            LedgerError::UnknownRef(_) => "UNKNOWN_REF",
            LedgerError::Validation(_) => "VALIDATION",
            LedgerError::Duplicate(_) => "DUPLICATE",
            LedgerError::Integrity { .. } => "INTEGRITY",
            LedgerError::Io(_) => "IO",
            LedgerError::Locked(_) => "LOCKED",
        }
    }
}

impl From<ContractError> for LedgerError {
    fn from(e: ContractError) -> Self {
        LedgerError::Validation(e.to_string())
    }
}

/// Exclusive writer lock on a ledger directory, released on drop.
#[derive(Debug)]
pub struct DirLock {
    path: PathBuf,
}

impl DirLock {
    pub fn acquire(dir: &Path) -> Result<DirLock, LedgerError> {
        let path = dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(DirLock { path }),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(LedgerError::Locked(format!(
                "{} exists; another process is writing this ledger",
                path.display()
            ))),
            Err(e) => Err(LedgerError::Io(format!("{}: {e}", path.display()))),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}
