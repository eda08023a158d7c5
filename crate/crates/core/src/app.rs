// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Glue shared by the CLI and the FFI layer.

use thiserror::Error;

use crate::contract::{ContractError, Timestamp};
use crate::engine::{build_kb, evaluate, EngineError, Obligation};
use crate::ledger::{Command, Ledger, LedgerError};
use crate::query::QueryError;
use crate::rdf::RdfError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Rdf(#[from] RdfError),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// 1 usage, 2 validation or domain, 3 integrity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Ledger(LedgerError::Integrity { .. })
            | Error::Query(QueryError::Integrity(_)) => 3,
            _ => 2,
        }
    }
}

/// Evaluates every registered contract and records the new obligations.
pub fn evaluate_and_record(ledger: &mut Ledger, now: &Timestamp) -> Result<Vec<Obligation>, Error> {
    let kb = build_kb(ledger.state());
    let fresh = evaluate(&kb.contracts, &kb)?;
    for o in &fresh {
        ledger.append(Command::RecordObligation(o.clone()), now.clone())?;
    }
    Ok(fresh)
}
