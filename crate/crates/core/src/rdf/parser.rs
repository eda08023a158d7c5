// Copyright (c) The AgreementForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Turtle reader for the subset the library writes, plus the usual
//! hand-written conveniences (comments, `PREFIX`, bare numbers and booleans,
//! long strings). Collections and `[ ]` blank nodes are rejected explicitly.

use super::writer::is_local_name;
use super::{BlankNode, Graph, Iri, Literal, RdfError, Term, Triple};
use crate::ns;

pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        graph: Graph::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    graph: Graph,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|x| x.eq_ignore_ascii_case(&c)))
            && self
                .peek_at(kw.len())
                .is_none_or(|c| c.is_whitespace() || c == '<')
    }

    fn syntax(&self, message: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), RdfError> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => Err(self.syntax(format!("expected '{c}', found '{x}'"))),
            None => Err(self.syntax(format!("expected '{c}', found end of input"))),
        }
    }

    fn document(&mut self) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.starts_with("@prefix") {
                for _ in 0.."@prefix".len() {
                    self.bump();
                }
                self.prefix_body()?;
                self.expect('.')?;
            } else if self.starts_with_keyword("PREFIX") {
                for _ in 0.."PREFIX".len() {
                    self.bump();
                }
                self.prefix_body()?;
            } else if self.starts_with("@base") || self.starts_with_keyword("BASE") {
                return Err(self.unsupported("base IRI declaration"));
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn unsupported(&self, construct: &str) -> RdfError {
        RdfError::Unsupported {
            line: self.line,
            column: self.column,
            construct: construct.to_string(),
        }
    }

    fn prefix_body(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return Err(self.syntax(format!("bad character '{c}' in prefix name")));
            }
            prefix.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let iri = self.iri_ref()?;
        self.graph
            .bind_prefix(&prefix, iri.as_str())
            .map_err(|e| RdfError::Syntax {
                line,
                column,
                message: e.to_string(),
            })
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        let subject = self.term()?;
        if subject.is_literal() {
            return Err(self.syntax("literal in subject position"));
        }
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.term()?;
                self.graph.insert(Triple::with_terms(
                    subject.clone(),
                    predicate.clone(),
                    object,
                ));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if self.peek() == Some('.') || self.peek().is_none() {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, RdfError> {
        if self.peek() == Some('a')
            && self
                .peek_at(1)
                .is_none_or(|c| c.is_whitespace() || c == '<' || c == '"')
        {
            self.bump();
            return Ok(ns::rdf_type());
        }
        match self.term()? {
            Term::Iri(iri) => Ok(iri),
            other => Err(self.syntax(format!("predicate must be an IRI, found {other}"))),
        }
    }

    fn term(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('(') => Err(self.unsupported("collection ( )")),
            Some('[') => Err(self.unsupported("anonymous blank node [ ]")),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node(),
            Some('"') | Some('\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.number(),
            Some(_) if self.starts_with_keyword_boundary("true") => {
                self.advance(4);
                Ok(Literal::typed("true", ns::xsd("boolean")).unwrap().into())
            }
            Some(_) if self.starts_with_keyword_boundary("false") => {
                self.advance(5);
                Ok(Literal::typed("false", ns::xsd("boolean")).unwrap().into())
            }
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
        }
    }

    fn starts_with_keyword_boundary(&self, kw: &str) -> bool {
        self.starts_with(kw)
            && self
                .peek_at(kw.len())
                .is_none_or(|c| !(c.is_alphanumeric() || c == ':' || c == '_'))
    }

    fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn iri_ref(&mut self) -> Result<Iri, RdfError> {
        let (line, column) = (self.line, self.column);
        if self.peek() != Some('<') {
            return Err(self.syntax("expected '<'"));
        }
        self.bump();
        let mut text = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\n') | None => return Err(self.syntax("unterminated IRI")),
                Some(c) => text.push(c),
            }
        }
        Iri::new(text).map_err(|e| RdfError::Syntax {
            line,
            column,
            message: format!("{e} (relative IRIs are not supported)"),
        })
    }

    fn prefixed_name(&mut self) -> Result<Iri, RdfError> {
        let (line, column) = (self.line, self.column);
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return Err(self.syntax(format!("unexpected character '{c}'")));
            }
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return Err(self.syntax(format!("expected prefixed name, found '{prefix}'")));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            // A dot belongs to the name only when more name follows.
            let inner_dot = c == '.'
                && self
                    .peek_at(1)
                    .is_some_and(|n| n.is_ascii_alphanumeric() || matches!(n, '_' | '-' | '.'));
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-') || inner_dot {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if !is_local_name(&local) {
            return Err(RdfError::Syntax {
                line,
                column,
                message: format!("invalid local name '{local}'"),
            });
        }
        let namespace = self
            .graph
            .namespace(&prefix)
            .ok_or_else(|| RdfError::UnknownPrefix {
                line,
                column,
                prefix: prefix.clone(),
            })?;
        Iri::new(format!("{namespace}{local}")).map_err(|e| RdfError::Syntax {
            line,
            column,
            message: e.to_string(),
        })
    }

    fn blank_node(&mut self) -> Result<Term, RdfError> {
        self.advance(2);
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        BlankNode::new(label)
            .map(Term::Blank)
            .map_err(|e| self.syntax(e.to_string()))
    }

    fn literal(&mut self) -> Result<Term, RdfError> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Literal::lang(lexical, tag)
                    .map(Term::Literal)
                    .map_err(|e| self.syntax(e.to_string()))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.advance(2);
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    _ => self.prefixed_name()?,
                };
                Literal::typed(lexical, datatype)
                    .map(Term::Literal)
                    .map_err(|e| self.syntax(e.to_string()))
            }
            _ => Ok(Literal::string(lexical).into()),
        }
    }

    fn string(&mut self) -> Result<String, RdfError> {
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.advance(2);
        }
        let mut out = String::new();
        loop {
            let c = self
                .bump()
                .ok_or_else(|| self.syntax("unterminated string literal"))?;
            match c {
                '\\' => out.push(self.escape()?),
                '\n' | '\r' if !long => return Err(self.syntax("newline in string literal")),
                c if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.advance(2);
                        // """a"""" ends with the last three quotes
                        while self.peek() == Some(quote) {
                            out.push(quote);
                            self.bump();
                        }
                        return Ok(out);
                    }
                    out.push(c);
                }
                c => out.push(c),
            }
        }
    }

    fn escape(&mut self) -> Result<char, RdfError> {
        let c = self
            .bump()
            .ok_or_else(|| self.syntax("unterminated escape"))?;
        Ok(match c {
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            'b' => '\u{8}',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' | 'U' => {
                let len = if c == 'u' { 4 } else { 8 };
                let mut hex = String::new();
                for _ in 0..len {
                    hex.push(self.bump().ok_or_else(|| self.syntax("short \\u escape"))?);
                }
                u32::from_str_radix(&hex, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| self.syntax(format!("bad unicode escape {hex}")))?
            }
            other => return Err(self.syntax(format!("unknown escape \\{other}"))),
        })
    }

    fn number(&mut self) -> Result<Term, RdfError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        let mut seen_dot = false;
        let mut seen_exp = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
            } else if c == '.'
                && !seen_dot
                && !seen_exp
                && self.peek_at(1).is_some_and(|n| n.is_ascii_digit())
            {
                seen_dot = true;
                text.push(c);
            } else if (c == 'e' || c == 'E') && !seen_exp {
                seen_exp = true;
                text.push(c);
                if let Some(sign @ ('+' | '-')) = self.peek_at(1) {
                    self.bump();
                    text.push(sign);
                }
            } else {
                break;
            }
            self.bump();
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.syntax(format!("malformed number '{text}'")));
        }
        let datatype = if seen_exp {
            "double"
        } else if seen_dot {
            "decimal"
        } else {
            "integer"
        };
        Ok(Literal::typed(text, ns::xsd(datatype)).unwrap().into())
    }
}
