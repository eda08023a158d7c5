// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

pub mod app;
pub mod contract;
pub mod demo;
pub mod engine;
pub mod ledger;
pub mod ns;
pub mod query;
pub mod rdf;
pub mod vocab;
