// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::ns::{self, ag, dcterms, oasis, owl, rdfs};
use crate::rdf::{Graph, Iri, Literal};

use super::{TermKind, VocabTerm};

/// `(class, superclass, label)`; the superclass is optional.
const CLASSES: &[(&str, Option<&str>, &str)] = &[
    (
        "r2r:RidesharingBooking",
        Some("osdm:Booking"),
        "ridesharing booking",
    ),
    ("r2r:OfferItem", Some("osdm:Offer"), "offer item"),
    ("r2r:TravelEpisode", None, "travel episode"),
    ("r2r:TransportationService", None, "transportation service"),
    (
        "r2r:RidesharingLeg",
        Some("r2r:TravelEpisode"),
        "ridesharing leg",
    ),
    ("r2r:Ride", Some("r2r:TransportationService"), "ride"),
    ("r2r:Driver", Some("tmorg:Operator"), "driver"),
    ("r2r:InventoryAllocation", None, "inventory allocation"),
    ("r2r:Consumable", None, "consumable"),
    (
        "r2r:InventoryReservation",
        Some("osdm:Reservation"),
        "inventory reservation",
    ),
    (
        "r2r:IncentiveSmartContract",
        Some("oasis:SmartContract"),
        "incentive smart contract",
    ),
    ("r2r:Voucher", None, "voucher"),
    (
        "r2r:DiscountVoucher",
        Some("r2r:Voucher"),
        "discount voucher",
    ),
    (
        "r2r:SeatUpgradeVoucher",
        Some("r2r:Voucher"),
        "seat upgrade voucher",
    ),
    ("osdm:Booking", None, "booking"),
    ("osdm:Offer", None, "offer"),
    ("osdm:Price", None, "price"),
    ("osdm:Trip", None, "trip"),
    ("osdm:Passenger", None, "passenger"),
    ("osdm:Reservation", None, "reservation"),
    ("tmorg:Organisation", None, "organisation"),
    ("tmorg:Operator", Some("tmorg:Organisation"), "operator"),
    ("oasis:SmartContract", None, "smart contract"),
    ("oasis:Action", None, "action"),
];

/// `(property, domain, range, is_object_property)`.
const PROPERTIES: &[(&str, &str, &str, bool)] = &[
    ("r2r:hasOfferItem", "osdm:Booking", "r2r:OfferItem", true),
    ("r2r:hasPrice", "r2r:OfferItem", "osdm:Price", true),
    (
        "r2r:forTravelEpisode",
        "r2r:OfferItem",
        "r2r:TravelEpisode",
        true,
    ),
    (
        "r2r:includesReservation",
        "r2r:OfferItem",
        "r2r:InventoryReservation",
        true,
    ),
    (
        "r2r:hasTransportationService",
        "r2r:TravelEpisode",
        "r2r:TransportationService",
        true,
    ),
    (
        "r2r:operatedBy",
        "r2r:TransportationService",
        "r2r:Driver",
        true,
    ),
    (
        "r2r:hasInventoryAllocation",
        "r2r:Ride",
        "r2r:InventoryAllocation",
        true,
    ),
    ("r2r:consumable", "owl:Thing", "r2r:Consumable", true),
    ("r2r:quantity", "owl:Thing", "xsd:nonNegativeInteger", false),
    (
        "r2r:includesTravelEpisode",
        "osdm:Trip",
        "r2r:TravelEpisode",
        true,
    ),
    ("r2r:hasTrip", "osdm:Offer", "osdm:Trip", true),
    ("r2r:origin", "r2r:TravelEpisode", "xsd:string", false),
    ("r2r:destination", "r2r:TravelEpisode", "xsd:string", false),
    ("r2r:issuedBy", "r2r:Voucher", "tmorg:Organisation", true),
    ("r2r:beneficiary", "r2r:Voucher", "osdm:Passenger", true),
    (
        "r2r:discountPercentage",
        "r2r:DiscountVoucher",
        "xsd:decimal",
        false,
    ),
    ("r2r:bookedBy", "osdm:Booking", "osdm:Passenger", true),
    ("r2r:relatesToEvent", "osdm:Booking", "skos:Concept", true),
    (
        "r2r:amountMinor",
        "osdm:Price",
        "xsd:nonNegativeInteger",
        false,
    ),
    ("r2r:currency", "osdm:Price", "xsd:string", false),
];

/// `(individual, class)`.
const INDIVIDUALS: &[(&str, &str)] = &[
    ("r2r:Seat", "r2r:Consumable"),
    ("r2r:issue", "oasis:Action"),
    ("r2r:book", "oasis:Action"),
];

fn iri(curie: &str) -> Iri {
    ns::expand(curie).expect("vocabulary tables use known prefixes")
}

fn label(text: &str) -> Literal {
    Literal::lang(text, "en").expect("static tag")
}

pub(super) fn tbox_terms() -> Vec<VocabTerm> {
    let mut out = Vec::new();
    for (curie, _, _) in CLASSES {
        out.push(VocabTerm::new(curie, TermKind::OntologyClass));
    }
    for (curie, _, _, object) in PROPERTIES {
        let kind = if *object {
            TermKind::ObjectProperty
        } else {
            TermKind::DataProperty
        };
        out.push(VocabTerm::new(curie, kind));
    }
    for (curie, _) in INDIVIDUALS {
        out.push(VocabTerm::new(curie, TermKind::Individual));
    }
    out
}

/// Classes, properties and individuals of the agreements ontology, with
/// the reused OSDM/Transmodel/OASIS classes declared alongside.
pub fn build_tbox() -> Graph {
    let mut g = Graph::with_default_prefixes();
    let onto = Iri::new(ns::R2R_ONTOLOGY).expect("constant");
    g.put_type(&onto, &owl("Ontology"));
    g.put_literal(
        &onto,
        &dcterms("title"),
        label("Ride2Rail Ontology for Agreements"),
    );
    g.put(
        &onto,
        &dcterms("license"),
        Iri::new(ns::CC_BY_4).expect("constant"),
    );
    g.put_literal(&onto, &owl("versionInfo"), Literal::string("1.0.0"));
    g.put(
        &onto,
        &owl("imports"),
        Iri::new("http://www.dmi.unict.it/oasis.owl").expect("constant"),
    );

    for (curie, parent, text) in CLASSES {
        let class = iri(curie);
        g.put_type(&class, &owl("Class"));
        g.put_literal(&class, &rdfs("label"), label(text));
        if let Some(parent) = parent {
            g.put(&class, &rdfs("subClassOf"), iri(parent));
        }
        if curie.starts_with("r2r:") {
            g.put(&class, &rdfs("isDefinedBy"), onto.clone());
        }
    }
    for (curie, domain, range, object) in PROPERTIES {
        let p = iri(curie);
        let kind = if *object {
            "ObjectProperty"
        } else {
            "DatatypeProperty"
        };
        g.put_type(&p, &owl(kind));
        g.put_literal(&p, &rdfs("label"), label(&split_camel(&curie[4..])));
        g.put(&p, &rdfs("domain"), iri(domain));
        g.put(&p, &rdfs("range"), iri(range));
        g.put(&p, &rdfs("isDefinedBy"), onto.clone());
    }
    for (curie, class) in INDIVIDUALS {
        let ind = iri(curie);
        g.put_type(&ind, &iri(class));
        g.put_type(&ind, &owl("NamedIndividual"));
        g.put_literal(&ind, &rdfs("label"), label(&curie[4..].to_lowercase()));
        g.put(&ind, &rdfs("isDefinedBy"), onto.clone());
    }
    g
}

fn split_camel(local: &str) -> String {
    let mut out = String::new();
    for (i, c) in local.chars().enumerate() {
        if c.is_uppercase() && i > 0 {
            out.push(' ');
        }
        out.extend(c.to_lowercase());
    }
    out
}

/// OASIS structure used when writing contracts as RDF. Only the class names
/// and `refersExactlyTo`/`refersAsNewTo` are OASIS proper; the linking
/// properties are local to this library.
pub fn build_oasis_declarations() -> Graph {
    let mut g = Graph::with_default_prefixes();
    let classes: &[(&str, Option<&str>)] = &[
        ("SmartContract", None),
        ("SmartContractInstance", None),
        ("SmartContractEntry", None),
        ("SmartContractEntryParticipant", Some("SmartContractEntry")),
        ("SmartContractEntryValue", Some("SmartContractEntry")),
        ("EntryTemplate", None),
        ("TemplateConstraint", None),
        ("ConditionalSet", None),
        ("Conditional", None),
        ("ConditionalBody", None),
        ("ConditionalHead", None),
        ("ConditionalAtom", None),
        ("ConditionalSubject", None),
        ("ConditionalObject", None),
        ("ConditionalOperator", None),
        ("ConditionalParameter", None),
        ("ConditionalInputParameter", Some("ConditionalParameter")),
        ("ConditionalOutputParameter", Some("ConditionalParameter")),
        ("ConditionalOperatorArgument", None),
        ("Action", None),
    ];
    for (local, parent) in classes {
        let c = oasis(local);
        g.put_type(&c, &owl("Class"));
        if let Some(parent) = parent {
            g.put(&c, &rdfs("subClassOf"), oasis(parent));
        }
    }
    // (property, domain, range); `None` leaves the position unconstrained.
    let props: &[(&str, Option<&str>, Option<&str>, bool)] = &[
        ("hasEntry", None, Some("oasis:SmartContractEntry"), true),
        (
            "entryName",
            Some("oasis:SmartContractEntry"),
            Some("xsd:string"),
            false,
        ),
        ("position", None, Some("xsd:nonNegativeInteger"), false),
        ("refersExactlyTo", None, None, true),
        ("refersAsNewTo", None, Some("oasis:EntryTemplate"), true),
        (
            "refersToEntry",
            None,
            Some("oasis:SmartContractEntry"),
            true,
        ),
        ("variable", None, Some("xsd:string"), false),
        (
            "requiredClass",
            Some("oasis:EntryTemplate"),
            Some("owl:Class"),
            true,
        ),
        (
            "hasConstraint",
            Some("oasis:EntryTemplate"),
            Some("oasis:TemplateConstraint"),
            true,
        ),
        ("onProperty", Some("oasis:TemplateConstraint"), None, true),
        (
            "constraintValue",
            Some("oasis:TemplateConstraint"),
            None,
            false,
        ),
        (
            "constraintEntry",
            Some("oasis:TemplateConstraint"),
            Some("oasis:SmartContractEntry"),
            true,
        ),
        (
            "hasConditionalSet",
            Some("oasis:SmartContract"),
            Some("oasis:ConditionalSet"),
            true,
        ),
        (
            "hasConditional",
            Some("oasis:ConditionalSet"),
            Some("oasis:Conditional"),
            true,
        ),
        (
            "hasBody",
            Some("oasis:Conditional"),
            Some("oasis:ConditionalBody"),
            true,
        ),
        (
            "hasHead",
            Some("oasis:Conditional"),
            Some("oasis:ConditionalHead"),
            true,
        ),
        ("hasAtom", None, Some("oasis:ConditionalAtom"), true),
        (
            "hasSubject",
            Some("oasis:ConditionalAtom"),
            Some("oasis:ConditionalSubject"),
            true,
        ),
        (
            "hasObject",
            Some("oasis:ConditionalAtom"),
            Some("oasis:ConditionalObject"),
            true,
        ),
        (
            "hasOperator",
            Some("oasis:ConditionalAtom"),
            Some("oasis:ConditionalOperator"),
            true,
        ),
        (
            "hasInputParameter",
            Some("oasis:ConditionalAtom"),
            Some("oasis:ConditionalInputParameter"),
            true,
        ),
        (
            "hasOutputParameter",
            Some("oasis:ConditionalAtom"),
            Some("oasis:ConditionalOutputParameter"),
            true,
        ),
        (
            "hasOperatorArgument",
            Some("oasis:ConditionalAtom"),
            Some("oasis:ConditionalOperatorArgument"),
            true,
        ),
        ("hasValue", None, None, false),
        (
            "argumentName",
            Some("oasis:ConditionalOperatorArgument"),
            Some("xsd:string"),
            false,
        ),
        (
            "argumentValue",
            Some("oasis:ConditionalOperatorArgument"),
            None,
            false,
        ),
        (
            "instanceOf",
            Some("oasis:SmartContractInstance"),
            Some("oasis:SmartContract"),
            true,
        ),
        (
            "instantiatesEntry",
            Some("oasis:SmartContractEntry"),
            Some("oasis:SmartContractEntry"),
            true,
        ),
        (
            "createdAt",
            Some("oasis:SmartContractInstance"),
            Some("xsd:dateTime"),
            false,
        ),
    ];
    declare_properties(&mut g, oasis, props);
    g
}

/// Operators and obligation vocabulary minted under `ag:`.
pub fn build_agreement_declarations() -> Graph {
    let mut g = Graph::with_default_prefixes();
    for op in ["isAssociatedWith", "pay", "refund"] {
        let i = ag(op);
        g.put_type(&i, &oasis("Action"));
        g.put_type(&i, &owl("NamedIndividual"));
        g.put_literal(&i, &rdfs("label"), label(&split_camel(op)));
    }
    for (local, comment) in [
        (
            "includesEpisodeOfType",
            "template constraint: the offer's trip has an episode of the given class",
        ),
        (
            "includesEpisodeNotOfType",
            "template constraint: the offer's trip has an episode outside the given class",
        ),
    ] {
        let p = ag(local);
        g.put_type(&p, &owl("AnnotationProperty"));
        g.put_literal(&p, &rdfs("comment"), label(comment));
    }
    for (local, parent) in [
        ("Obligation", None),
        ("PaymentObligation", Some("Obligation")),
        ("RefundObligation", Some("Obligation")),
    ] {
        let c = ag(local);
        g.put_type(&c, &owl("Class"));
        if let Some(parent) = parent {
            g.put(&c, &rdfs("subClassOf"), ag(parent));
        }
    }
    let props: &[(&str, Option<&str>, Option<&str>, bool)] = &[
        ("debtor", Some("ag:Obligation"), None, true),
        ("creditor", Some("ag:Obligation"), None, true),
        ("amount", Some("ag:Obligation"), Some("osdm:Price"), true),
        ("firedBy", None, Some("oasis:Conditional"), true),
        ("firingKey", None, Some("xsd:string"), false),
        ("createdAtSeq", None, Some("xsd:nonNegativeInteger"), false),
    ];
    declare_properties(&mut g, ag, props);
    g
}

fn declare_properties(
    g: &mut Graph,
    mint: impl Fn(&str) -> Iri,
    props: &[(&str, Option<&str>, Option<&str>, bool)],
) {
    for (local, domain, range, object) in props {
        let p = mint(local);
        let kind = if *object {
            "ObjectProperty"
        } else {
            "DatatypeProperty"
        };
        g.put_type(&p, &owl(kind));
        if let Some(d) = domain {
            g.put(&p, &rdfs("domain"), iri(d));
        }
        if let Some(r) = range {
            g.put(&p, &rdfs("range"), iri(r));
        }
    }
}
