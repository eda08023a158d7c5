// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::fmt;

use super::RdfError;
use crate::ns;

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    /// Accepts text with a scheme separator `:` ahead of any `/`, `#` or `?`,
    /// and without whitespace or characters that cannot appear inside `<>`.
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        let colon = text
            .find(':')
            .ok_or_else(|| RdfError::InvalidTerm(format!("IRI without scheme: {text:?}")))?;
        if colon == 0 || text[..colon].contains(['/', '#', '?']) {
            return Err(RdfError::InvalidTerm(format!(
                "IRI without scheme: {text:?}"
            )));
        }
        if !text[..colon]
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        {
            return Err(RdfError::InvalidTerm(format!("bad IRI scheme: {text:?}")));
        }
        if let Some(c) = text
            .chars()
            .find(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\".contains(*c))
        {
            return Err(RdfError::InvalidTerm(format!(
                "character {c:?} not allowed in IRI {text:?}"
            )));
        }
        Ok(Iri(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Appends `suffix` to the IRI text, e.g. to derive node names from an agreement IRI.
    pub fn derive(&self, suffix: &str) -> Iri {
        Iri::new(format!("{}{}", self.0, suffix)).expect("suffix keeps IRI valid")
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl serde::Serialize for Iri {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Iri {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Iri::new(text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(RdfError::InvalidTerm(format!(
                "bad blank node label {label:?}"
            )));
        }
        Ok(BlankNode(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: ns::xsd("string"),
            language: None,
        }
    }

    /// A typed literal. `rdf:langString` is rejected here; use [`Literal::lang`].
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, RdfError> {
        if datatype == ns::rdf("langString") {
            return Err(RdfError::InvalidTerm(
                "rdf:langString literal requires a language tag".into(),
            ));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        })
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Result<Self, RdfError> {
        let tag = tag.into();
        let mut parts = tag.split('-');
        let primary_ok = parts
            .next()
            .is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphabetic()));
        let rest_ok = parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()));
        if !primary_ok || !rest_ok {
            return Err(RdfError::InvalidTerm(format!("bad language tag {tag:?}")));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: ns::rdf("langString"),
            language: Some(tag),
        })
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: ns::xsd("integer"),
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    fn is_simple(&self) -> bool {
        self.language.is_none()
            && self.datatype.as_str() == "http://www.w3.org/2001/XMLSchema#string"
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")
        } else if self.is_simple() {
            Ok(())
        } else {
            write!(f, "^^{}", self.datatype)
        }
    }
}

pub(crate) fn escape_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// An RDF term. Ordering follows the N-Triples rendering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// N-Triples rendering.
    pub fn to_ntriples(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Blank(b) => write!(f, "_:{}", b.0),
            Term::Literal(lit) => lit.fmt(f),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        // Byte-wise comparison of the renderings, without building them.
        // Leading bytes: '"' < '<' < '_'.
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => iri_cmp(a, b),
            (Term::Blank(a), Term::Blank(b)) => a.0.cmp(&b.0),
            (Term::Literal(a), Term::Literal(b)) => a.rendered_bytes().cmp(b.rendered_bytes()),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

fn rank(t: &Term) -> u8 {
    match t {
        Term::Literal(_) => 0,
        Term::Iri(_) => 1,
        Term::Blank(_) => 2,
    }
}

/// Orders IRIs as their `<...>` renderings.
pub(crate) fn iri_cmp(a: &Iri, b: &Iri) -> Ordering {
    let (a, b) = (a.0.as_bytes(), b.0.as_bytes());
    let n = a.len().min(b.len());
    a[..n].cmp(&b[..n]).then_with(|| {
        let next = |s: &[u8]| s.get(n).copied().unwrap_or(b'>');
        next(a).cmp(&next(b))
    })
}

impl Literal {
    fn rendered_bytes(&self) -> impl Iterator<Item = u8> + '_ {
        let body = self.lexical.bytes().flat_map(|b| {
            let escaped = matches!(b, b'"' | b'\\' | b'\n' | b'\r' | b'\t');
            let shown = match b {
                b'\n' => b'n',
                b'\r' => b'r',
                b'\t' => b't',
                other => other,
            };
            std::iter::once(b'\\')
                .take(usize::from(escaped))
                .chain(std::iter::once(shown))
        });
        let (lang, datatype): (&[u8], &[u8]) = match &self.language {
            Some(tag) => (tag.as_bytes(), b""),
            None if self.is_simple() => (b"", b""),
            None => (b"", self.datatype.0.as_bytes()),
        };
        let at = &b"@"[..usize::from(!lang.is_empty())];
        let (open, close) = if datatype.is_empty() {
            (&b""[..], &b""[..])
        } else {
            (&b"^^<"[..], &b">"[..])
        };
        std::iter::once(b'"')
            .chain(body)
            .chain(std::iter::once(b'"'))
            .chain(at.iter().copied())
            .chain(lang.iter().copied())
            .chain(open.iter().copied())
            .chain(datatype.iter().copied())
            .chain(close.iter().copied())
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<&Iri> for Term {
    fn from(iri: &Iri) -> Self {
        Term::Iri(iri.clone())
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// Subject, IRI predicate, object. Literal subjects cannot be constructed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::InvalidTerm(format!(
                "literal {subject} in subject position"
            )));
        }
        let predicate = match predicate {
            Term::Iri(iri) => iri,
            other => {
                return Err(RdfError::InvalidTerm(format!(
                    "predicate must be an IRI, got {other}"
                )))
            }
        };
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    /// Infallible constructor for the common IRI-subject case.
    pub fn iri(subject: &Iri, predicate: &Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: Term::Iri(subject.clone()),
            predicate: predicate.clone(),
            object: object.into(),
        }
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub(crate) fn with_terms(subject: Term, predicate: Iri, object: Term) -> Self {
        debug_assert!(!subject.is_literal());
        Triple {
            subject,
            predicate,
            object,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Triple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.subject
            .cmp(&other.subject)
            .then_with(|| iri_cmp(&self.predicate, &other.predicate))
            .then_with(|| self.object.cmp(&other.object))
    }
}
