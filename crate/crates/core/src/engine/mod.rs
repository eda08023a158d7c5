// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Executes conditionals: bodies are matched against a knowledge base,
//! each distinct match fires its head once and yields an [`Obligation`].

mod evaluate;
mod kb;
mod matcher;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use evaluate::{evaluate, witness_vars};
pub use kb::{build_kb, BookingView, KnowledgeBase, RideView};
pub use matcher::{match_body, Bindings};

use crate::contract::{Price, VoucherKind};
use crate::ns;
use crate::rdf::Iri;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("unsupported operator {0}")]
    UnsupportedOperator(String),
    #[error("unsupported conditional {conditional}: {message}")]
    Unsupported {
        conditional: String,
        message: String,
    },
}

/// Identifies one match of one conditional.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiringKey(pub [u8; 32]);

impl FiringKey {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(text: &str) -> Option<Self> {
        let bytes = hex::decode(text).ok()?;
        Some(FiringKey(bytes.try_into().ok()?))
    }
}

impl fmt::Display for FiringKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for FiringKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiringKey({})", self.to_hex())
    }
}

impl Serialize for FiringKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FiringKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        FiringKey::from_hex(&text)
            .ok_or_else(|| serde::de::Error::custom("firing key must be 64 hex digits"))
    }
}

/// SHA-256 over `conditional "\n" sorted name=IRI lines "\n" "k=" k`.
pub fn binding_digest(conditional: &Iri, bindings: &BTreeMap<String, Iri>, k: u32) -> FiringKey {
    let pairs: Vec<String> = bindings
        .iter()
        .map(|(name, iri)| format!("{name}={}", iri.as_str()))
        .collect();
    let text = format!("{}\n{}\nk={k}", conditional.as_str(), pairs.join("\n"));
    FiringKey(Sha256::digest(text.as_bytes()).into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObligationKind {
    IssueVoucher {
        voucher: VoucherKind,
        issuer: Iri,
        beneficiary: Iri,
    },
    Pay {
        price: Price,
        from: Iri,
        to: Iri,
    },
    Refund {
        price: Price,
        to: Iri,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obligation {
    pub kind: ObligationKind,
    pub contract: Iri,
    pub source_conditional: Iri,
    pub firing_key: FiringKey,
    pub created_at_seq: u64,
}

impl Obligation {
    /// Node name in the exported A-Box.
    pub fn iri(&self) -> Iri {
        self.source_conditional
            .derive(&format!("-obligation-{}", &self.firing_key.to_hex()[..16]))
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = ns::curie;
        match &self.kind {
            ObligationKind::IssueVoucher {
                voucher: VoucherKind::Discount(p),
                issuer,
                beneficiary,
            } => write!(
                f,
                "issue {p}% discount voucher: {} -> {}",
                c(issuer),
                c(beneficiary)
            )?,
            ObligationKind::IssueVoucher {
                voucher: VoucherKind::SeatUpgrade,
                issuer,
                beneficiary,
            } => write!(
                f,
                "issue seat upgrade voucher: {} -> {}",
                c(issuer),
                c(beneficiary)
            )?,
            ObligationKind::Pay { price, from, to } => {
                write!(f, "pay {price}: {} -> {}", c(from), c(to))?
            }
            ObligationKind::Refund { price, to } => write!(f, "refund {price} to {}", c(to))?,
        }
        write!(
            f,
            " [{} {}]",
            c(&self.source_conditional),
            &self.firing_key.to_hex()[..12]
        )
    }
}
