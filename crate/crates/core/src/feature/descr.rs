//! Feature-structure descriptions.
//!
//! ```text
//! descr  := term+                                  conjunction
//! term   := TYPE | TAG | '[' entries? ']' | '<' list? '>'
//! entries:= entry (',' entry)*
//! entry  := PATH ':' descr | descr
//! list   := descr (',' descr)* ('|' descr)?
//! PATH   := FEAT ('|' FEAT)*
//! TAG    := '#' digits
//! ```
//!
//! Feature names start with an uppercase letter, type names with anything
//! else (`+` and `-` are ordinary atomic type names). `<a, b>` is sugar for
//! an `ne-list` chain over FIRST/REST ending in `e-list`; `<a | #1>` ends in
//! the tagged tail instead.

use std::collections::HashMap;

use super::dag::Graph;
use super::error::DescriptionError;
use super::lattice::{FeatId, TypeId, TypeLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Type(TypeId),
    Tag(u32),
    Avm(Vec<Entry>),
    List {
        items: Vec<Description>,
        tail: Option<Box<Description>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Path(Vec<FeatId>, Description),
    Bare(Description),
}

/// A parsed description with names resolved against a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Description {
    pub terms: Vec<Term>,
}

#[derive(Clone, Copy)]
struct ListNames {
    elist: TypeId,
    nelist: TypeId,
    first: FeatId,
    rest: FeatId,
}

impl Description {
    pub fn parse(text: &str, lat: &TypeLattice) -> Result<Description, DescriptionError> {
        let mut p = Parser {
            src: text,
            pos: 0,
            lat,
        };
        let d = p.descr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(d)
    }

    /// All top-level path entries, in order. Used by rule output edits.
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.terms.iter().flat_map(|t| match t {
            Term::Avm(es) => es.as_slice(),
            _ => &[],
        })
    }

    /// Build this description as a new node of `g`, binding `#n` tags
    /// through `tags`. Equations are queued on the graph; call
    /// [`Graph::resolve`] to solve them.
    pub(crate) fn build(
        &self,
        g: &mut Graph,
        tags: &mut HashMap<u32, usize>,
        lat: &TypeLattice,
    ) -> Result<usize, DescriptionError> {
        let node = g.add_node(lat.top());
        self.build_at(g, node, tags, lat)?;
        Ok(node)
    }

    pub(crate) fn build_at(
        &self,
        g: &mut Graph,
        node: usize,
        tags: &mut HashMap<u32, usize>,
        lat: &TypeLattice,
    ) -> Result<(), DescriptionError> {
        for term in &self.terms {
            match term {
                Term::Type(t) => {
                    let n = g.add_node(*t);
                    g.equate(node, n);
                }
                Term::Tag(k) => match tags.get(k) {
                    Some(&bound) => g.equate(node, bound),
                    None => {
                        tags.insert(*k, node);
                    }
                },
                Term::Avm(entries) => {
                    for e in entries {
                        match e {
                            Entry::Bare(d) => d.build_at(g, node, tags, lat)?,
                            Entry::Path(path, d) => {
                                let (last, prefix) = path.split_last().expect("non-empty path");
                                let at = g.walk_or_create(node, prefix, lat.top());
                                let v = d.build(g, tags, lat)?;
                                g.add_arc(at, *last, v);
                            }
                        }
                    }
                }
                Term::List { items, tail } => {
                    let names = list_names(lat)?;
                    let mut cur = node;
                    for item in items {
                        let ne = g.add_node(names.nelist);
                        g.equate(cur, ne);
                        let v = item.build(g, tags, lat)?;
                        g.add_arc(cur, names.first, v);
                        let rest = g.add_node(lat.top());
                        g.add_arc(cur, names.rest, rest);
                        cur = rest;
                    }
                    match tail {
                        Some(t) => t.build_at(g, cur, tags, lat)?,
                        None => {
                            let e = g.add_node(names.elist);
                            g.equate(cur, e);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn list_names(lat: &TypeLattice) -> Result<ListNames, DescriptionError> {
    Ok(ListNames {
        elist: lat.type_id("e-list").ok_or(DescriptionError::NoListTypes)?,
        nelist: lat.type_id("ne-list").ok_or(DescriptionError::NoListTypes)?,
        first: lat.feat_id("FIRST").ok_or(DescriptionError::NoListTypes)?,
        rest: lat.feat_id("REST").ok_or(DescriptionError::NoListTypes)?,
    })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    lat: &'a TypeLattice,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> DescriptionError {
        DescriptionError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DescriptionError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            if c.is_alphanumeric() || c == '-' || c == '+' || c == '_' || c == '.' {
                end = i + c.len_utf8();
            } else {
                break;
            }
        }
        self.pos += end;
        &rest[..end]
    }

    fn starts_term(&mut self) -> bool {
        match self.peek() {
            Some('[') | Some('<') | Some('#') => true,
            Some(c) => c.is_alphanumeric() || c == '+' || c == '-' || c == '_',
            None => false,
        }
    }

    fn descr(&mut self) -> Result<Description, DescriptionError> {
        let mut terms = Vec::new();
        while self.starts_term() {
            // A feature name here would be an entry, not a term.
            if self.peek().is_some_and(|c| c.is_uppercase()) {
                break;
            }
            terms.push(self.term()?);
        }
        if terms.is_empty() {
            return Err(self.error("expected a description"));
        }
        Ok(Description { terms })
    }

    fn term(&mut self) -> Result<Term, DescriptionError> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut entries = Vec::new();
                if !self.eat(']') {
                    loop {
                        entries.push(self.entry()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Term::Avm(entries))
            }
            Some('<') => {
                self.pos += 1;
                let mut items = Vec::new();
                let mut tail = None;
                if !self.eat('>') {
                    loop {
                        items.push(self.descr()?);
                        if self.eat('|') {
                            tail = Some(Box::new(self.descr()?));
                            self.expect('>')?;
                            break;
                        }
                        if self.eat('>') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Term::List { items, tail })
            }
            Some('#') => {
                self.pos += 1;
                let w = self.word();
                w.parse::<u32>()
                    .map(Term::Tag)
                    .map_err(|_| self.error("tag must be `#` followed by digits"))
            }
            _ => {
                let w = self.word();
                if w.is_empty() {
                    return Err(self.error("expected a type name"));
                }
                self.lat
                    .type_id(w)
                    .map(Term::Type)
                    .ok_or_else(|| DescriptionError::UnknownType(w.to_string()))
            }
        }
    }

    fn entry(&mut self) -> Result<Entry, DescriptionError> {
        if self.peek().is_some_and(|c| c.is_uppercase()) {
            let mut path = Vec::new();
            loop {
                let w = self.word();
                let f = self
                    .lat
                    .feat_id(w)
                    .ok_or_else(|| DescriptionError::UnknownFeature(w.to_string()))?;
                path.push(f);
                if !self.eat('|') {
                    break;
                }
            }
            self.expect(':')?;
            Ok(Entry::Path(path, self.descr()?))
        } else {
            Ok(Entry::Bare(self.descr()?))
        }
    }
}
