// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ContractError;

/// ISO-4217 style code: three ASCII uppercase letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Currency(String);

impl Currency {
    pub fn new(code: &str) -> Result<Self, ContractError> {
        if code.len() == 3 && code.chars().all(|c| c.is_ascii_uppercase()) {
            Ok(Currency(code.to_string()))
        } else {
            Err(ContractError::Validation(format!(
                "currency must be a 3-letter uppercase code, got {code:?}"
            )))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Currency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Currency {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Currency {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Currency::new(&s).map_err(serde::de::Error::custom)
    }
}

/// An amount in minor currency units.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Price {
    pub amount_minor: u64,
    pub currency: Currency,
}

impl Price {
    pub fn new(amount_minor: u64, currency: &str) -> Result<Self, ContractError> {
        Ok(Price {
            amount_minor,
            currency: Currency::new(currency)?,
        })
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.amount_minor, self.currency)
    }
}

/// A percentage in (0, 100], held in hundredths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Percentage(u32);

impl Percentage {
    pub fn from_hundredths(hundredths: u32) -> Result<Self, ContractError> {
        if hundredths == 0 || hundredths > 10_000 {
            return Err(ContractError::Validation(format!(
                "percentage must be in (0, 100], got {}",
                Percentage(hundredths)
            )));
        }
        Ok(Percentage(hundredths))
    }

    pub fn whole(percent: u32) -> Result<Self, ContractError> {
        Self::from_hundredths(percent.saturating_mul(100))
    }

    pub fn hundredths(&self) -> u32 {
        self.0
    }
}

impl FromStr for Percentage {
    type Err = ContractError;

    /// Decimal text with at most two fractional digits.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || ContractError::Validation(format!("bad percentage {text:?}"));
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if int.is_empty()
            || frac.len() > 2
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let int: u32 = int.parse().map_err(|_| bad())?;
        let frac: u32 = format!("{frac:0<2}").parse().map_err(|_| bad())?;
        Self::from_hundredths(
            int.checked_mul(100)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(bad)?,
        )
    }
}

impl fmt::Display for Percentage {
    /// Canonical decimal: no trailing fractional zeros.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (int, frac) = (self.0 / 100, self.0 % 100);
        match frac {
            0 => write!(f, "{int}"),
            x if x % 10 == 0 => write!(f, "{int}.{}", x / 10),
            x => write!(f, "{int}.{x:02}"),
        }
    }
}

impl Serialize for Percentage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Percentage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// RFC 3339 UTC timestamp, kept in its validated textual form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Timestamp(String);

impl Timestamp {
    pub fn parse(text: &str) -> Result<Self, ContractError> {
        let parsed = DateTime::parse_from_rfc3339(text).map_err(|e| {
            ContractError::Validation(format!("bad RFC 3339 timestamp {text:?}: {e}"))
        })?;
        if parsed.offset().local_minus_utc() != 0 || !text.ends_with('Z') {
            return Err(ContractError::Validation(format!(
                "timestamp must be UTC with a 'Z' suffix: {text:?}"
            )));
        }
        Ok(Timestamp(text.to_string()))
    }

    /// Current system time; only for callers that own the clock.
    pub fn now() -> Self {
        Timestamp(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Timestamp::parse(&s).map_err(serde::de::Error::custom)
    }
}
