// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures and brute-force oracles for the integration tests.

#![allow(dead_code)]

pub mod gen;

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use agreementforge::contract::{
    Conditional, ConditionalAtom, Constraint, ConstraintValue, ContractKind, Entry, EntryBinding,
    EntryTemplate, Operand, OperatorArg, Price, SmartContract, Timestamp, VoucherKind, VoucherSpec,
};
use agreementforge::demo::{booking, demo_contracts, instance, register, StepClock};
use agreementforge::ledger::{Command, Ledger, LedgerError};
use agreementforge::ns::{ag, osdm, owl, r2r, rbe, rdf_type, rdfs, skos, tmorg};
use agreementforge::query::{Pattern, PatternTerm};
use agreementforge::rdf::{Graph, Iri, Literal, Term, Triple};
use agreementforge::vocab::full_schema;

pub fn ts(text: &str) -> Timestamp {
    Timestamp::parse(text).unwrap()
}

pub fn eur(minor: u64) -> Price {
    Price::new(minor, "EUR").unwrap()
}

// ---------------------------------------------------------------------------
// Oracle: enumerate every assignment of the body variables over the typed
// individuals of the A-Box and test each atom by scanning triples.

pub struct Oracle<'a> {
    abox: &'a Graph,
    /// `(s, p) -> objects` over the A-Box and the schema, from one pass.
    index: BTreeMap<(Term, Iri), Vec<Term>>,
    supers: RefCell<BTreeMap<Iri, BTreeSet<Iri>>>,
    live: Vec<Iri>,
}

impl<'a> Oracle<'a> {
    pub fn new(abox: &'a Graph) -> Self {
        let schema = full_schema();
        let mut index: BTreeMap<(Term, Iri), Vec<Term>> = BTreeMap::new();
        for t in abox.iter().chain(schema.iter()) {
            index
                .entry((t.subject().clone(), t.predicate().clone()))
                .or_default()
                .push(t.object().clone());
        }
        let mut scan = Oracle {
            abox,
            index,
            supers: RefCell::default(),
            live: Vec::new(),
        };
        scan.live = scan.scan_live_bookings();
        scan
    }

    fn objects(&self, s: &Iri, p: &Iri) -> Vec<Term> {
        self.index
            .get(&(Term::Iri(s.clone()), p.clone()))
            .cloned()
            .unwrap_or_default()
    }

    fn iri_objects(&self, s: &Iri, p: &Iri) -> Vec<Iri> {
        self.objects(s, p)
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .collect()
    }

    fn has(&self, s: &Iri, p: &Iri, o: &Term) -> bool {
        self.objects(s, p).contains(o)
    }

    fn superclasses(&self, class: &Iri) -> BTreeSet<Iri> {
        if let Some(s) = self.supers.borrow().get(class) {
            return s.clone();
        }
        let mut seen = BTreeSet::from([class.clone()]);
        let mut todo = vec![class.clone()];
        while let Some(c) = todo.pop() {
            for sup in self.iri_objects(&c, &rdfs("subClassOf")) {
                if seen.insert(sup.clone()) {
                    todo.push(sup);
                }
            }
        }
        self.supers.borrow_mut().insert(class.clone(), seen.clone());
        seen
    }

    fn has_class(&self, x: &Iri, class: &Iri) -> bool {
        self.iri_objects(x, &rdf_type()).iter().any(|t| {
            if !self.supers.borrow().contains_key(t) {
                self.superclasses(t);
            }
            self.supers.borrow()[t].contains(class)
        })
    }

    fn narrower_or_equal(&self, concept: &Iri, ancestor: &Iri) -> bool {
        let mut cur = vec![concept.clone()];
        while let Some(c) = cur.pop() {
            if &c == ancestor {
                return true;
            }
            cur.extend(self.iri_objects(&c, &skos("broader")));
        }
        false
    }

    fn cancelled(&self, booking: &Iri) -> bool {
        self.iri_objects(booking, &r2r("relatesToEvent"))
            .iter()
            .any(|e| self.narrower_or_equal(e, &rbe("RidesharingCancelled")))
    }

    fn live_bookings(&self) -> Vec<Iri> {
        self.live.clone()
    }

    fn scan_live_bookings(&self) -> Vec<Iri> {
        let mut out: Vec<Iri> = self
            .abox
            .iter()
            .filter(|t| {
                t.predicate() == &rdf_type() && t.object() == &Term::Iri(r2r("RidesharingBooking"))
            })
            .filter_map(|t| t.subject().as_iri().cloned())
            .filter(|b| !self.cancelled(b))
            .collect();
        out.dedup();
        out
    }

    fn targets(&self, b: &Iri) -> BTreeSet<Iri> {
        let mut out = BTreeSet::from([b.clone()]);
        for offer in self.iri_objects(b, &r2r("hasOfferItem")) {
            for leg in self.iri_objects(&offer, &r2r("forTravelEpisode")) {
                out.extend(self.iri_objects(&leg, &r2r("hasTransportationService")));
            }
            out.insert(offer);
        }
        out
    }

    fn template_ok(&self, t: &EntryTemplate, x: &Iri, env: &BTreeMap<String, Iri>) -> bool {
        if !self.has_class(x, &t.required_class) {
            return false;
        }
        t.constraints.iter().all(|c| self.constraint_ok(c, x, env))
    }

    fn episodes(&self, offer: &Iri) -> Vec<Iri> {
        self.iri_objects(offer, &r2r("hasTrip"))
            .iter()
            .flat_map(|trip| self.iri_objects(trip, &r2r("includesTravelEpisode")))
            .collect()
    }

    fn constraint_ok(&self, c: &Constraint, x: &Iri, env: &BTreeMap<String, Iri>) -> bool {
        match &c.value {
            ConstraintValue::Entry(e) if c.predicate == owl("differentFrom") => {
                env.get(e) != Some(x)
            }
            ConstraintValue::Entry(e) => match env.get(e) {
                Some(v) => self.has(x, &c.predicate, &Term::Iri(v.clone())),
                None => !self.objects(x, &c.predicate).is_empty(),
            },
            ConstraintValue::Term(Term::Iri(class))
                if c.predicate == ag("includesEpisodeOfType") =>
            {
                self.episodes(x).iter().any(|ep| self.has_class(ep, class))
            }
            ConstraintValue::Term(Term::Iri(class))
                if c.predicate == ag("includesEpisodeNotOfType") =>
            {
                self.episodes(x).iter().any(|ep| !self.has_class(ep, class))
            }
            ConstraintValue::Term(v) => self.has(x, &c.predicate, v),
        }
    }

    fn entry_ok(
        &self,
        contract: &SmartContract,
        name: &str,
        x: &Iri,
        env: &BTreeMap<String, Iri>,
    ) -> bool {
        match &contract.entry(name).unwrap().binding {
            EntryBinding::Exact(i) => i == x,
            EntryBinding::Template(t) => self.template_ok(t, x, env),
        }
    }

    fn operand_value(&self, o: &Operand, env: &BTreeMap<String, Iri>) -> Option<Iri> {
        match o {
            Operand::Entry(n) => env.get(n).cloned(),
            Operand::Template { var, .. } => env.get(var).cloned(),
            Operand::Iri(i) => Some(i.clone()),
            Operand::Literal(_) => None,
        }
    }

    fn atom_holds(&self, atom: &ConditionalAtom, env: &BTreeMap<String, Iri>) -> bool {
        if atom.operator == ag("isAssociatedWith") {
            let (Some(b), Some(concept)) = (
                self.operand_value(&atom.subjects[0], env),
                self.operand_value(&atom.objects[0], env),
            ) else {
                return false;
            };
            return self
                .iri_objects(&b, &r2r("relatesToEvent"))
                .iter()
                .any(|e| self.narrower_or_equal(e, &concept));
        }
        let Some(t) = self.operand_value(&atom.objects[0], env) else {
            return false;
        };
        let reaching: Vec<Iri> = self
            .live_bookings()
            .into_iter()
            .filter(|b| self.targets(b).contains(&t))
            .collect();
        let bookers: Vec<Iri> = reaching
            .iter()
            .flat_map(|b| self.iri_objects(b, &r2r("bookedBy")))
            .collect();
        atom.subjects.iter().all(|s| match s {
            Operand::Entry(n) => env.get(n).is_some_and(|v| bookers.contains(v)),
            Operand::Template { template, .. } => {
                bookers.iter().any(|p| self.template_ok(template, p, env))
            }
            _ => false,
        })
    }

    /// Bookings of `who` with a target satisfying the atom's object.
    fn count_bookings(
        &self,
        atom: &ConditionalAtom,
        who: &Iri,
        env: &BTreeMap<String, Iri>,
    ) -> usize {
        self.live_bookings()
            .into_iter()
            .filter(|b| self.iri_objects(b, &r2r("bookedBy")).contains(who))
            .filter(|b| {
                self.targets(b).iter().any(|t| match &atom.objects[0] {
                    Operand::Template { template, .. } => self.template_ok(template, t, env),
                    Operand::Iri(i) => i == t,
                    Operand::Entry(e) => env.get(e) == Some(t),
                    Operand::Literal(_) => false,
                })
            })
            .count()
    }
}

fn times(atom: &ConditionalAtom) -> Option<usize> {
    atom.arg("times").map(|l| l.lexical().parse().unwrap())
}

/// Brute-force matches of `cond` as `(bindings, k)` pairs.
pub fn oracle_matches(
    contract: &SmartContract,
    cond: &Conditional,
    abox: &Graph,
) -> BTreeSet<(BTreeMap<String, Iri>, u32)> {
    Oracle::new(abox).matches(contract, cond)
}

impl Oracle<'_> {
    pub fn matches(
        &self,
        contract: &SmartContract,
        cond: &Conditional,
    ) -> BTreeSet<(BTreeMap<String, Iri>, u32)> {
        let scan = self;
        let abox = self.abox;
        // Variables: body entries plus object-template variables of plain atoms.
        let mut entry_vars = BTreeSet::new();
        let mut template_vars: BTreeMap<String, &EntryTemplate> = BTreeMap::new();
        for atom in &cond.body {
            for s in &atom.subjects {
                if let Operand::Entry(n) = s {
                    entry_vars.insert(n.clone());
                }
            }
            for o in &atom.objects {
                match o {
                    Operand::Entry(n) => {
                        entry_vars.insert(n.clone());
                    }
                    Operand::Template { var, template } if times(atom).is_none() => {
                        template_vars.insert(var.clone(), template);
                    }
                    _ => {}
                }
            }
        }
        let vars: Vec<String> = entry_vars
            .iter()
            .chain(template_vars.keys())
            .cloned()
            .collect();
        let mut typed: Vec<Iri> = abox
            .iter()
            .filter(|t| t.predicate() == &rdf_type())
            .filter_map(|t| t.subject().as_iri().cloned())
            .collect();
        typed.sort();
        typed.dedup();
        // Per-variable candidates: typed individuals of the required class.
        let domains: Vec<Vec<Iri>> = vars
            .iter()
            .map(|v| {
                let class = match template_vars.get(v) {
                    Some(t) => Some(t.required_class.clone()),
                    None => match &contract.entry(v).unwrap().binding {
                        EntryBinding::Template(t) => Some(t.required_class.clone()),
                        EntryBinding::Exact(_) => None,
                    },
                };
                typed
                    .iter()
                    .filter(|x| class.as_ref().is_none_or(|c| scan.has_class(x, c)))
                    .cloned()
                    .collect()
            })
            .collect();
        if domains.iter().any(Vec::is_empty) {
            return BTreeSet::new();
        }

        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; vars.len()];
        'outer: loop {
            let env: BTreeMap<String, Iri> = vars
                .iter()
                .cloned()
                .zip(idx.iter().enumerate().map(|(d, &i)| domains[d][i].clone()))
                .collect();
            let well_typed = entry_vars
                .iter()
                .all(|n| scan.entry_ok(contract, n, &env[n], &env))
                && template_vars
                    .iter()
                    .all(|(v, t)| scan.template_ok(t, &env[v], &env));
            if well_typed
                && cond
                    .body
                    .iter()
                    .filter(|a| times(a).is_none())
                    .all(|a| scan.atom_holds(a, &env))
            {
                match cond.body.iter().find(|a| times(a).is_some()) {
                    None => {
                        out.insert((env.clone(), 0));
                    }
                    Some(atom) => {
                        let Operand::Entry(who) = &atom.subjects[0] else {
                            panic!("fixture shape")
                        };
                        let n = times(atom).unwrap();
                        let count = scan.count_bookings(atom, &env[who], &env);
                        for k in 1..=(count / n) as u32 {
                            out.insert((env.clone(), k));
                        }
                    }
                }
            }
            // Odometer over the domain.
            for pos in (0..idx.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < domains[pos].len() {
                    continue 'outer;
                }
                idx[pos] = 0;
            }
            break;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Fixtures.

fn voucher_head(kind: VoucherKind, beneficiary: &str) -> ConditionalAtom {
    let spec = VoucherSpec {
        kind,
        beneficiary: beneficiary.into(),
        issuer: "tsp".into(),
    };
    ConditionalAtom::new(
        vec![Operand::entry("tsp")],
        r2r("issue"),
        vec![Operand::template("voucher", spec.template())],
    )
}

/// An incentive with extra body shapes: a bound ride entry, an existential
/// subject template, event association next to a booking, and a repeated
/// booking over offer items.
pub fn probe_contract() -> SmartContract {
    let id = ag("ProbeIncentive");
    let book_ride = |subject: Operand| {
        ConditionalAtom::new(vec![subject], r2r("book"), vec![Operand::entry("ride")])
    };
    let assoc = |concept: &str| {
        ConditionalAtom::new(
            vec![Operand::entry("booking")],
            ag("isAssociatedWith"),
            vec![Operand::Iri(rbe(concept))],
        )
    };
    let mut repeated = ConditionalAtom::new(
        vec![Operand::entry("passenger")],
        r2r("book"),
        vec![Operand::template(
            "item",
            EntryTemplate::of(r2r("OfferItem")),
        )],
    );
    repeated.operator_args.push(OperatorArg {
        key: "times".into(),
        value: Literal::integer(2),
    });
    let upgrade = || voucher_head(VoucherKind::SeatUpgrade, "passenger");
    SmartContract {
        conditionals: vec![
            Conditional {
                id: id.derive("-delayed"),
                body: vec![
                    book_ride(Operand::entry("passenger")),
                    assoc("RidesharingDelayed"),
                ],
                head: vec![upgrade()],
            },
            Conditional {
                id: id.derive("-anyone"),
                body: vec![
                    book_ride(Operand::template(
                        "someone",
                        EntryTemplate::of(osdm("Passenger")),
                    )),
                    assoc("RidesharingNoShow"),
                ],
                head: vec![upgrade()],
            },
            Conditional {
                id: id.derive("-twice"),
                body: vec![repeated],
                head: vec![voucher_head(
                    VoucherKind::Discount("5".parse().unwrap()),
                    "passenger",
                )],
            },
        ],
        id,
        label: "Probe incentive".into(),
        kind: ContractKind::Incentive,
        entries: vec![
            Entry::participant("passenger", EntryTemplate::of(osdm("Passenger"))),
            Entry::participant("tsp", EntryTemplate::of(tmorg("Operator"))),
            Entry::value("ride", EntryTemplate::of(r2r("Ride"))),
            Entry::value(
                "booking",
                EntryTemplate::of(r2r("RidesharingBooking"))
                    .with(Constraint::entry(r2r("bookedBy"), "passenger")),
            ),
        ],
    }
}

pub const EVENT_SEQUENCES: &[&[&str]] = &[
    &[],
    &["RidesharingStarted"],
    &["RidesharingStarted", "RidesharingCompleted"],
    &[
        "RidesharingDelayedByDriver",
        "RidesharingStarted",
        "RidesharingCompleted",
    ],
    &["RidesharingCancelledByDriver"],
    &["RidesharingCancelledByPassenger"],
    &["RidesharingNoShowDriver"],
    &["RidesharingNoShowPassenger"],
    &["RidesharingStarted", "RidesharingDelayedByPassenger"],
];

/// Random ledger with at most 4 passengers, 3 rides and 6 bookings. Commands
/// the ledger rejects (capacity, event order) are skipped.
pub fn random_fixture(seed: u64) -> Ledger {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ledger = Ledger::new();
    let mut clock = StepClock::default();
    let mut contracts = demo_contracts();
    contracts.push(probe_contract());
    for c in &contracts {
        ledger.append(register(c), clock.tick()).unwrap();
    }
    let tsp = ag("tsp1");
    ledger
        .append(
            Command::RegisterOperator {
                operator: tsp.clone(),
            },
            clock.tick(),
        )
        .unwrap();

    let passengers: Vec<Iri> = (1..=rng.gen_range(1..=4))
        .map(|i| ag(&format!("p{i}")))
        .collect();
    let rides: Vec<Iri> = (1..=rng.gen_range(1..=3))
        .map(|i| ag(&format!("ride{i}")))
        .collect();
    for (i, ride) in rides.iter().enumerate() {
        let cmd = Command::RecordRide {
            ride: ride.clone(),
            driver: ag(&format!("d{}", i % 2 + 1)),
            allocated_seats: rng.gen_range(1..=4),
        };
        ledger.append(cmd, clock.tick()).unwrap();
    }
    let mut bookings = Vec::new();
    let mut known = BTreeSet::new();
    for i in 1..=rng.gen_range(0..=6) {
        let b = ag(&format!("b{i}"));
        // Early bookings mostly go to distinct passengers so fixtures reach
        // the passenger bound.
        let p = match passengers.get(i - 1) {
            Some(p) if rng.gen_bool(0.7) => p,
            _ => passengers.choose(&mut rng).unwrap(),
        };
        let ride = rides.choose(&mut rng).unwrap();
        let onward = rng.gen_bool(0.5).then_some("stop:C");
        let mut cmd = booking(
            &b,
            p,
            ride,
            eur(rng.gen_range(500..2000)),
            ("stop:A", "stop:B"),
            onward,
        );
        if let Command::RecordBooking { reserved_seats, .. } = &mut cmd {
            *reserved_seats = if rng.gen_bool(0.25) { 2 } else { 1 };
        }
        match ledger.append(cmd, clock.tick()) {
            Ok(_) => {
                bookings.push(b);
                known.insert(p.clone());
            }
            Err(LedgerError::Capacity(_)) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }
    for b in &bookings {
        for event in *EVENT_SEQUENCES.choose(&mut rng).unwrap() {
            let cmd = Command::RecordEvent {
                booking: b.clone(),
                event: rbe(event),
            };
            ledger.append(cmd, clock.tick()).unwrap();
        }
    }
    for c in &contracts[1..] {
        if c.kind != ContractKind::Incentive || c.id == ag("ProbeIncentive") {
            continue;
        }
        let name = c.participants().next().unwrap().name.clone();
        for p in &known {
            if rng.gen_bool(0.7) {
                let cmd = instance(&c.id, &[(name.as_str(), p.clone()), ("tsp", tsp.clone())]);
                ledger.append(cmd, clock.tick()).unwrap();
            }
        }
    }
    ledger
}

// ---------------------------------------------------------------------------
// Select oracle: try every triple for each pattern in turn, keeping picks that
// agree on shared variables. Rows are projected onto the variables in order
// of first appearance and sorted by their N-Triples text.

pub fn select_oracle(g: &Graph, patterns: &[Pattern]) -> Vec<Vec<Term>> {
    let mut columns: Vec<String> = Vec::new();
    for p in patterns {
        for t in [&p.s, &p.p, &p.o] {
            if let PatternTerm::Var(v) = t {
                if !columns.contains(v) {
                    columns.push(v.clone());
                }
            }
        }
    }
    let triples: Vec<&Triple> = g.iter().collect();
    let mut rows = BTreeMap::new();
    pick(&triples, patterns, &mut BTreeMap::new(), &mut |sol| {
        let row: Vec<Term> = columns.iter().map(|c| sol[c.as_str()].clone()).collect();
        let key: Vec<String> = row.iter().map(Term::to_ntriples).collect();
        rows.insert(key, row);
    });
    rows.into_values().collect()
}

fn pick<'p>(
    triples: &[&Triple],
    patterns: &'p [Pattern],
    sol: &mut BTreeMap<&'p str, Term>,
    emit: &mut dyn FnMut(&BTreeMap<&'p str, Term>),
) {
    let Some((p, rest)) = patterns.split_first() else {
        emit(sol);
        return;
    };
    for t in triples {
        let parts = [
            t.subject().clone(),
            Term::Iri(t.predicate().clone()),
            t.object().clone(),
        ];
        let mut added = Vec::new();
        let mut ok = true;
        for (pt, value) in [&p.s, &p.p, &p.o].into_iter().zip(parts) {
            ok &= match pt {
                PatternTerm::Const(c) => *c == value,
                PatternTerm::Var(v) => match sol.get(v.as_str()) {
                    Some(bound) => *bound == value,
                    None => {
                        sol.insert(v.as_str(), value);
                        added.push(v.as_str());
                        true
                    }
                },
            };
            if !ok {
                break;
            }
        }
        if ok {
            pick(triples, rest, sol, emit);
        }
        for v in added {
            sol.remove(v);
        }
    }
}
