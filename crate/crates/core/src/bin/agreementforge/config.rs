// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::Deserialize;

use agreementforge::app::Error;
use agreementforge::contract::{Currency, Timestamp};

pub const CONFIG_FILE: &str = "agreementforge.toml";
pub const ENV_PREFIX: &str = "AF_";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClockMode {
    System,
    Fixed(Timestamp),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub ledger_dir: PathBuf,
    pub default_currency: Currency,
    pub clock: ClockMode,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    ledger_dir: Option<String>,
    default_currency: Option<String>,
    clock: Option<String>,
}

fn usage(msg: String) -> Error {
    Error::Usage(msg)
}

fn parse_clock(text: &str) -> Result<ClockMode, Error> {
    if text == "system" {
        return Ok(ClockMode::System);
    }
    let fixed = text.strip_prefix("fixed:").unwrap_or(text);
    Timestamp::parse(fixed)
        .map(ClockMode::Fixed)
        .map_err(|e| usage(format!("clock: {e}")))
}

impl CliConfig {
    /// Defaults, then the config file, then `AF_*` variables.
    pub fn load(file: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Self, Error> {
        let raw = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                toml::from_str::<RawConfig>(&text)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?
            }
            None => RawConfig::default(),
        };
        let pick = |key: &str, from_file: Option<String>| {
            env(&format!("{ENV_PREFIX}{}", key.to_uppercase())).or(from_file)
        };

        let ledger_dir = pick("ledger_dir", raw.ledger_dir).unwrap_or_else(|| ".".to_string());
        let currency =
            pick("default_currency", raw.default_currency).unwrap_or_else(|| "EUR".to_string());
        let clock = pick("clock", raw.clock).unwrap_or_else(|| "system".to_string());
        Ok(CliConfig {
            ledger_dir: PathBuf::from(ledger_dir),
            default_currency: Currency::new(&currency)
                .map_err(|e| usage(format!("default_currency: {e}")))?,
            clock: parse_clock(&clock)?,
        })
    }

    pub fn now(&self) -> Timestamp {
        match &self.clock {
            ClockMode::System => Timestamp::now(),
            ClockMode::Fixed(ts) => ts.clone(),
        }
    }
}
