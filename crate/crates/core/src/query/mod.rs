// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Conjunctive pattern matching and the competency questions built on it.

mod cq;
mod table;

use std::collections::BTreeMap;

use thiserror::Error;

pub use cq::{
    answer_table, cq_agreed_price, cq_declared_seats, cq_incentive_benefit,
    cq_incentive_conditions, cq_incentives_by_provider, cq_leg_endpoints, describe_atom,
    describe_conditional, QUESTIONS,
};
pub use table::Table;

use crate::contract::ContractError;
use crate::rdf::{Graph, Iri, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("invalid query: {0}")]
    Invalid(String),
    #[error(transparent)]
    Contract(#[from] ContractError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

pub fn var(name: &str) -> PatternTerm {
    PatternTerm::Var(name.to_string())
}

pub fn val(term: impl Into<Term>) -> PatternTerm {
    PatternTerm::Const(term.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub s: PatternTerm,
    pub p: PatternTerm,
    pub o: PatternTerm,
}

impl Pattern {
    pub fn new(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> Self {
        Pattern { s, p, o }
    }

    fn terms(&self) -> [&PatternTerm; 3] {
        [&self.s, &self.p, &self.o]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl QueryResult {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, in row order.
    pub fn values(&self, name: &str) -> Vec<&Term> {
        match self.column(name) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_table(&self) -> Table {
        Table::new(
            self.columns.clone(),
            self.rows
                .iter()
                .map(|r| r.iter().map(table::cell).collect())
                .collect(),
        )
    }
}

type Solution = BTreeMap<String, Term>;

fn resolve<'a>(t: &'a PatternTerm, sol: &'a Solution) -> Option<&'a Term> {
    match t {
        PatternTerm::Const(c) => Some(c),
        PatternTerm::Var(v) => sol.get(v),
    }
}

fn bind(sol: &mut Solution, t: &PatternTerm, value: &Term) -> bool {
    match t {
        PatternTerm::Const(c) => c == value,
        PatternTerm::Var(v) => match sol.get(v) {
            Some(existing) => existing == value,
            None => {
                sol.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

/// All assignments satisfying every pattern. Columns follow first
/// appearance; rows are sorted by their N-Triples rendering.
pub fn select(g: &Graph, patterns: &[Pattern]) -> Result<QueryResult, QueryError> {
    if patterns.is_empty() {
        return Err(QueryError::Invalid(
            "at least one pattern is required".into(),
        ));
    }
    let mut columns: Vec<String> = Vec::new();
    for t in patterns.iter().flat_map(Pattern::terms) {
        if let PatternTerm::Var(v) = t {
            if v.is_empty() {
                return Err(QueryError::Invalid("empty variable name".into()));
            }
            if !columns.contains(v) {
                columns.push(v.clone());
            }
        }
    }

    let mut solutions = vec![Solution::new()];
    for pat in patterns {
        let mut next = Vec::new();
        for sol in &solutions {
            let s = resolve(&pat.s, sol);
            let o = resolve(&pat.o, sol);
            let p = match resolve(&pat.p, sol) {
                Some(Term::Iri(i)) => Some(i.clone()),
                Some(_) => continue,
                None => None,
            };
            for t in g.triples_matching(s, p.as_ref(), o) {
                let mut extended = sol.clone();
                let predicate: Term = t.predicate().into();
                if bind(&mut extended, &pat.s, t.subject())
                    && bind(&mut extended, &pat.p, &predicate)
                    && bind(&mut extended, &pat.o, t.object())
                {
                    next.push(extended);
                }
            }
        }
        solutions = next;
    }

    let mut rows: Vec<Vec<Term>> = solutions
        .into_iter()
        .map(|sol| columns.iter().map(|c| sol[c].clone()).collect())
        .collect();
    rows.sort_by_cached_key(|r| r.iter().map(Term::to_ntriples).collect::<Vec<_>>());
    rows.dedup();
    Ok(QueryResult { columns, rows })
}

/// True when `iri` occurs as the subject of any typing triple.
pub(crate) fn is_typed(g: &Graph, iri: &Iri) -> bool {
    !g.types_of(&iri.into()).is_empty()
}
