//! Functional-style OWL 2 QL reader and writer.
//!
//! Only the object-property fragment is accepted. Sugar such as
//! `EquivalentClasses`, property domains/ranges and n-ary disjointness is
//! rewritten into the basic inclusion and disjointness forms while parsing;
//! anything outside that fragment is rejected with
//! [`OwlError::UnsupportedAxiom`].

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    intern, Axiom, ClassExpr, Entity, Kind, ModelError, Prefixes, PropExpr, OWL_NS, RDFS_NS, RDF_NS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OwlError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unsupported axiom or expression `{keyword}` at line {line}")]
    UnsupportedAxiom { keyword: String, line: usize },
    #[error("unknown prefix `{prefix}` at line {line}")]
    UnknownPrefix { prefix: String, line: usize },
}

/// TBox and ABox axioms plus the prefix table they were read with.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    pub tbox: BTreeSet<Axiom>,
    pub abox: BTreeSet<Axiom>,
    pub prefixes: Prefixes,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an axiom to the TBox or ABox; returns false if already present.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        if axiom.is_abox() {
            self.abox.insert(axiom)
        } else {
            self.tbox.insert(axiom)
        }
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter().chain(self.abox.iter())
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }

    /// Set union of axioms; prefixes of `self` win on conflicts.
    pub fn merge(&mut self, other: &Ontology) {
        for a in other.axioms() {
            self.insert(a.clone());
        }
        for (k, v) in &other.prefixes {
            self.prefixes.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }

    /// Writes the ontology in functional-style syntax with full IRIs.
    pub fn to_functional(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.prefixes {
            let _ = writeln!(out, "Prefix({k}:=<{v}>)");
        }
        out.push_str("Ontology(\n");
        for a in self.axioms() {
            out.push_str("  ");
            write_axiom(&mut out, a);
            out.push('\n');
        }
        out.push_str(")\n");
        out
    }
}

fn write_entity(out: &mut String, e: &Entity) {
    let _ = write!(out, "<{}>", e.owl_iri());
}

fn write_prop(out: &mut String, p: &PropExpr) {
    match p {
        PropExpr::Direct(e) => write_entity(out, e),
        PropExpr::Inverse(e) => {
            out.push_str("ObjectInverseOf(");
            write_entity(out, e);
            out.push(')');
        }
    }
}

fn write_class(out: &mut String, c: &ClassExpr) {
    match c {
        ClassExpr::Atomic(e) => write_entity(out, e),
        ClassExpr::Some { prop, filler } => {
            out.push_str("ObjectSomeValuesFrom(");
            write_prop(out, prop);
            out.push(' ');
            write_entity(out, filler);
            out.push(')');
        }
    }
}

fn write_axiom(out: &mut String, a: &Axiom) {
    match a {
        Axiom::ClassInclusion(b, c) | Axiom::ClassDisjoint(b, c) => {
            out.push_str(if matches!(a, Axiom::ClassInclusion(..)) {
                "SubClassOf("
            } else {
                "DisjointClasses("
            });
            write_class(out, b);
            out.push(' ');
            write_class(out, c);
        }
        Axiom::PropInclusion(p, q) | Axiom::PropDisjoint(p, q) => {
            out.push_str(if matches!(a, Axiom::PropInclusion(..)) {
                "SubObjectPropertyOf("
            } else {
                "DisjointObjectProperties("
            });
            write_prop(out, p);
            out.push(' ');
            write_prop(out, q);
        }
        Axiom::Reflexive(p) => {
            out.push_str("ReflexiveObjectProperty(");
            write_entity(out, p);
        }
        Axiom::Irreflexive(p) => {
            out.push_str("IrreflexiveObjectProperty(");
            write_entity(out, p);
        }
        Axiom::ClassAssertion(c, i) => {
            out.push_str("ClassAssertion(");
            write_entity(out, c);
            out.push(' ');
            write_entity(out, i);
        }
        Axiom::PropAssertion(r, x, y) => {
            out.push_str("ObjectPropertyAssertion(");
            write_entity(out, r);
            out.push(' ');
            write_entity(out, x);
            out.push(' ');
            write_entity(out, y);
        }
        Axiom::DifferentIndividuals(x, y) => {
            out.push_str("DifferentIndividuals(");
            write_entity(out, x);
            out.push(' ');
            write_entity(out, y);
        }
    }
    out.push(')');
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Eq,
    Iri(String),
    Name(String),
    Str,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, OwlError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let bump = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        match c {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    bump(c, &mut line, &mut col);
                }
            }
            '(' | ')' | '=' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let tok = match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Eq,
                };
                out.push(Spanned {
                    tok,
                    line: l,
                    col: k,
                });
            }
            '<' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let mut iri = String::new();
                loop {
                    match chars.next() {
                        Some('>') => {
                            bump('>', &mut line, &mut col);
                            break;
                        }
                        Some(c) if !c.is_whitespace() => {
                            bump(c, &mut line, &mut col);
                            iri.push(c);
                        }
                        _ => {
                            return Err(OwlError::Syntax {
                                line: l,
                                col: k,
                                msg: "unterminated IRI".into(),
                            })
                        }
                    }
                }
                out.push(Spanned {
                    tok: Tok::Iri(iri),
                    line: l,
                    col: k,
                });
            }
            '"' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let mut escaped = false;
                loop {
                    match chars.next() {
                        Some(c) => {
                            bump(c, &mut line, &mut col);
                            if escaped {
                                escaped = false;
                            } else if c == '\\' {
                                escaped = true;
                            } else if c == '"' {
                                break;
                            }
                        }
                        None => {
                            return Err(OwlError::Syntax {
                                line: l,
                                col: k,
                                msg: "unterminated string".into(),
                            })
                        }
                    }
                }
                // Language tags and datatypes trail the literal.
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == ')' || c == '(' {
                        break;
                    }
                    chars.next();
                    bump(c, &mut line, &mut col);
                }
                out.push(Spanned {
                    tok: Tok::Str,
                    line: l,
                    col: k,
                });
            }
            _ => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '<' | '"' | '=') {
                        break;
                    }
                    chars.next();
                    bump(c, &mut line, &mut col);
                    name.push(c);
                }
                out.push(Spanned {
                    tok: Tok::Name(name),
                    line: l,
                    col: k,
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: Prefixes,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn line(&self) -> usize {
        self.peek()
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn err(&self, msg: impl Into<String>) -> OwlError {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .or_else(|| self.toks.last().map(|t| (t.line, t.col + 1)))
            .unwrap_or((1, 1));
        OwlError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<Spanned, OwlError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), OwlError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {tok:?}"))),
        }
    }

    fn at_close(&self) -> bool {
        matches!(
            self.peek(),
            Some(Spanned {
                tok: Tok::Close,
                ..
            })
        )
    }

    /// Skips one balanced item (a token, or `Name(...)`).
    fn skip_item(&mut self) -> Result<(), OwlError> {
        let t = self.next()?;
        match t.tok {
            Tok::Close => return Err(self.err("unbalanced `)`")),
            Tok::Open => {}
            _ => {
                if !matches!(self.peek(), Some(Spanned { tok: Tok::Open, .. })) {
                    return Ok(());
                }
                self.pos += 1;
            }
        }
        let mut depth = 1;
        while depth > 0 {
            match self.next()?.tok {
                Tok::Open => depth += 1,
                Tok::Close => depth -= 1,
                _ => {}
            }
        }
        Ok(())
    }

    fn skip_annotations(&mut self) -> Result<(), OwlError> {
        while matches!(self.peek(), Some(Spanned { tok: Tok::Name(n), .. }) if n == "Annotation") {
            self.skip_item()?;
        }
        Ok(())
    }

    fn entity(&mut self) -> Result<Entity, OwlError> {
        let t = self.next()?;
        let text = match t.tok {
            Tok::Iri(iri) => format!("<{iri}>"),
            Tok::Name(n) if n.contains(':') => n,
            Tok::Name(n) => {
                return Err(OwlError::UnsupportedAxiom {
                    keyword: n,
                    line: t.line,
                })
            }
            Tok::Str => {
                return Err(OwlError::UnsupportedAxiom {
                    keyword: "literal".into(),
                    line: t.line,
                })
            }
            _ => {
                self.pos -= 1;
                return Err(self.err("expected an IRI or prefixed name"));
            }
        };
        intern(&text, &self.prefixes).map_err(|e| match e {
            ModelError::UnknownPrefix(prefix) => OwlError::UnknownPrefix {
                prefix,
                line: t.line,
            },
            other => OwlError::Syntax {
                line: t.line,
                col: t.col,
                msg: other.to_string(),
            },
        })
    }

    /// Returns the keyword if the next tokens are `Keyword (`.
    fn peek_call(&self) -> Option<String> {
        match (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
            (
                Some(Spanned {
                    tok: Tok::Name(n), ..
                }),
                Some(Spanned { tok: Tok::Open, .. }),
            ) => Some(n.clone()),
            _ => None,
        }
    }

    fn prop(&mut self) -> Result<PropExpr, OwlError> {
        match self.peek_call() {
            Some(k) if k == "ObjectInverseOf" => {
                self.pos += 2;
                let inner = self.prop()?;
                self.expect(Tok::Close)?;
                Ok(inner.inverse())
            }
            Some(k) => Err(OwlError::UnsupportedAxiom {
                keyword: k,
                line: self.line(),
            }),
            None => Ok(PropExpr::Direct(self.entity()?)),
        }
    }

    fn class(&mut self) -> Result<ClassExpr, OwlError> {
        match self.peek_call() {
            Some(k) if k == "ObjectSomeValuesFrom" => {
                self.pos += 2;
                let prop = self.prop()?;
                if self.peek_call().is_some() {
                    let keyword = self.peek_call().unwrap_or_default();
                    return Err(OwlError::UnsupportedAxiom {
                        keyword: format!("ObjectSomeValuesFrom with {keyword} filler"),
                        line: self.line(),
                    });
                }
                let filler = self.entity()?;
                self.expect(Tok::Close)?;
                Ok(ClassExpr::Some { prop, filler })
            }
            Some(k) => Err(OwlError::UnsupportedAxiom {
                keyword: k,
                line: self.line(),
            }),
            None => Ok(ClassExpr::Atomic(self.entity()?)),
        }
    }

    fn basic(&mut self, keyword: &str) -> Result<ClassExpr, OwlError> {
        let line = self.line();
        let c = self.class()?;
        if c.basic_kind().is_none() {
            return Err(OwlError::UnsupportedAxiom {
                keyword: format!("{keyword} with a qualified existential operand"),
                line,
            });
        }
        Ok(c)
    }

    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, OwlError>,
    ) -> Result<Vec<T>, OwlError> {
        let mut v = Vec::new();
        while !self.at_close() {
            v.push(item(self)?);
        }
        Ok(v)
    }

    fn axiom(&mut self, keyword: &str, line: usize, out: &mut Ontology) -> Result<(), OwlError> {
        self.skip_annotations()?;
        match keyword {
            "Declaration"
            | "AnnotationAssertion"
            | "SubAnnotationPropertyOf"
            | "AnnotationPropertyDomain"
            | "AnnotationPropertyRange" => {
                while !self.at_close() {
                    self.skip_item()?;
                }
            }
            "SubClassOf" => {
                let b = self.basic(keyword)?;
                let c = self.class()?;
                out.insert(Axiom::ClassInclusion(b, c));
            }
            "EquivalentClasses" => {
                let cs = self.list(|p| p.basic(keyword))?;
                self.arity_at_least(keyword, cs.len(), 2, line)?;
                for (i, a) in cs.iter().enumerate() {
                    for (j, b) in cs.iter().enumerate() {
                        if i != j {
                            out.insert(Axiom::ClassInclusion(a.clone(), b.clone()));
                        }
                    }
                }
            }
            "DisjointClasses" => {
                let cs = self.list(|p| p.basic(keyword))?;
                self.arity_at_least(keyword, cs.len(), 2, line)?;
                for (i, a) in cs.iter().enumerate() {
                    for b in &cs[i + 1..] {
                        out.insert(Axiom::ClassDisjoint(a.clone(), b.clone()));
                    }
                }
            }
            "SubObjectPropertyOf" => {
                if self.peek_call().as_deref() == Some("ObjectPropertyChain") {
                    return Err(OwlError::UnsupportedAxiom {
                        keyword: "ObjectPropertyChain".into(),
                        line,
                    });
                }
                let p = self.prop()?;
                let q = self.prop()?;
                out.insert(Axiom::PropInclusion(p, q));
            }
            "EquivalentObjectProperties" => {
                let ps = self.list(Self::prop)?;
                self.arity_at_least(keyword, ps.len(), 2, line)?;
                for (i, a) in ps.iter().enumerate() {
                    for (j, b) in ps.iter().enumerate() {
                        if i != j {
                            out.insert(Axiom::PropInclusion(a.clone(), b.clone()));
                        }
                    }
                }
            }
            "DisjointObjectProperties" => {
                let ps = self.list(Self::prop)?;
                self.arity_at_least(keyword, ps.len(), 2, line)?;
                for (i, a) in ps.iter().enumerate() {
                    for b in &ps[i + 1..] {
                        out.insert(Axiom::PropDisjoint(a.clone(), b.clone()));
                    }
                }
            }
            "InverseObjectProperties" => {
                let r = self.prop()?;
                let s = self.prop()?;
                out.insert(Axiom::PropInclusion(r.clone(), s.inverse()));
                out.insert(Axiom::PropInclusion(s, r.inverse()));
            }
            "ObjectPropertyDomain" | "ObjectPropertyRange" => {
                let r = self.prop()?;
                let c = self.class()?;
                let r = if keyword == "ObjectPropertyRange" {
                    r.inverse()
                } else {
                    r
                };
                out.insert(Axiom::ClassInclusion(ClassExpr::exists(r), c));
            }
            "ReflexiveObjectProperty" => {
                let p = self.prop()?.prop().clone();
                out.insert(Axiom::Reflexive(p));
            }
            "IrreflexiveObjectProperty" => {
                let p = self.prop()?.prop().clone();
                out.insert(Axiom::Irreflexive(p));
            }
            "ClassAssertion" => {
                if let Some(k) = self.peek_call() {
                    return Err(OwlError::UnsupportedAxiom {
                        keyword: format!("ClassAssertion with {k}"),
                        line,
                    });
                }
                let c = self.entity()?;
                let i = self.entity()?;
                out.insert(Axiom::ClassAssertion(c, i));
            }
            "ObjectPropertyAssertion" => {
                let p = self.prop()?;
                let x = self.entity()?;
                let y = self.entity()?;
                out.insert(match p {
                    PropExpr::Direct(r) => Axiom::PropAssertion(r, x, y),
                    PropExpr::Inverse(r) => Axiom::PropAssertion(r, y, x),
                });
            }
            "DifferentIndividuals" => {
                let is = self.list(Self::entity)?;
                self.arity_at_least(keyword, is.len(), 2, line)?;
                for (i, a) in is.iter().enumerate() {
                    for b in &is[i + 1..] {
                        out.insert(Axiom::DifferentIndividuals(a.clone(), b.clone()));
                    }
                }
            }
            other => {
                return Err(OwlError::UnsupportedAxiom {
                    keyword: other.to_string(),
                    line,
                })
            }
        }
        self.expect(Tok::Close)
    }

    fn arity_at_least(
        &self,
        keyword: &str,
        got: usize,
        min: usize,
        line: usize,
    ) -> Result<(), OwlError> {
        if got < min {
            return Err(OwlError::Syntax {
                line,
                col: 1,
                msg: format!("{keyword} needs at least {min} operands"),
            });
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> Result<(), OwlError> {
        self.expect(Tok::Open)?;
        let t = self.next()?;
        let name = match t.tok {
            Tok::Name(n) if n.ends_with(':') => n[..n.len() - 1].to_string(),
            _ => {
                self.pos -= 1;
                return Err(self.err("expected a prefix name ending in `:`"));
            }
        };
        self.expect(Tok::Eq)?;
        let iri = match self.next()?.tok {
            Tok::Iri(iri) => iri,
            _ => {
                self.pos -= 1;
                return Err(self.err("expected a namespace IRI"));
            }
        };
        self.expect(Tok::Close)?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn document(&mut self) -> Result<Ontology, OwlError> {
        while matches!(self.peek(), Some(Spanned { tok: Tok::Name(n), .. }) if n == "Prefix") {
            self.pos += 1;
            self.prefix_decl()?;
        }
        match self.next()? {
            Spanned {
                tok: Tok::Name(n), ..
            } if n == "Ontology" => {}
            _ => {
                self.pos -= 1;
                return Err(self.err("expected `Ontology(`"));
            }
        }
        self.expect(Tok::Open)?;
        let mut out = Ontology::new();
        // Optional ontology IRI and version IRI.
        for _ in 0..2 {
            let skip = match self.peek() {
                Some(Spanned {
                    tok: Tok::Iri(_), ..
                }) => true,
                Some(Spanned {
                    tok: Tok::Name(_), ..
                }) => self.peek_call().is_none(),
                _ => false,
            };
            if skip {
                self.pos += 1;
            }
        }
        while !self.at_close() {
            let line = self.line();
            let keyword = match self.peek_call() {
                Some(k) => k,
                None => return Err(self.err("expected an axiom")),
            };
            self.pos += 2;
            match keyword.as_str() {
                "Import" => {
                    return Err(OwlError::UnsupportedAxiom { keyword, line });
                }
                "Annotation" => {
                    while !self.at_close() {
                        self.skip_item()?;
                    }
                    self.expect(Tok::Close)?;
                }
                _ => self.axiom(&keyword, line, &mut out)?,
            }
        }
        self.expect(Tok::Close)?;
        if let Some(t) = self.peek() {
            return Err(OwlError::Syntax {
                line: t.line,
                col: t.col,
                msg: "trailing input after ontology".into(),
            });
        }
        out.prefixes = std::mem::take(&mut self.prefixes);
        Ok(out)
    }
}

fn default_prefixes() -> Prefixes {
    [("owl", OWL_NS), ("rdf", RDF_NS), ("rdfs", RDFS_NS)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Parses a functional-syntax ontology into basic axiom forms.
pub fn parse_ontology(text: &str) -> Result<Ontology, OwlError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        prefixes: default_prefixes(),
    };
    parser.document()
}

fn normalize_axiom(axiom: Axiom) -> Axiom {
    match axiom {
        Axiom::PropInclusion(PropExpr::Inverse(p), q) => {
            Axiom::PropInclusion(PropExpr::Direct(p), q.inverse())
        }
        Axiom::PropDisjoint(PropExpr::Inverse(p), q) => {
            Axiom::PropDisjoint(PropExpr::Direct(p), q.inverse())
        }
        Axiom::ClassDisjoint(b1, b2)
            if b1.basic_kind() == Some(Kind::C) && b2.basic_kind() == Some(Kind::R) =>
        {
            Axiom::ClassDisjoint(b2, b1)
        }
        other => other,
    }
}

fn collect_tbox_symbols(tbox: &BTreeSet<Axiom>) -> (BTreeSet<Entity>, BTreeSet<Entity>) {
    let mut classes = BTreeSet::new();
    let mut props = BTreeSet::new();
    let class =
        |c: &ClassExpr, classes: &mut BTreeSet<Entity>, props: &mut BTreeSet<Entity>| match c {
            ClassExpr::Atomic(e) => {
                classes.insert(e.clone());
            }
            ClassExpr::Some { prop, filler } => {
                props.insert(prop.prop().clone());
                classes.insert(filler.clone());
            }
        };
    for a in tbox {
        match a {
            Axiom::ClassInclusion(b, c) | Axiom::ClassDisjoint(b, c) => {
                class(b, &mut classes, &mut props);
                class(c, &mut classes, &mut props);
            }
            Axiom::PropInclusion(p, q) | Axiom::PropDisjoint(p, q) => {
                props.insert(p.prop().clone());
                props.insert(q.prop().clone());
            }
            Axiom::Reflexive(p) | Axiom::Irreflexive(p) => {
                props.insert(p.clone());
            }
            _ => {}
        }
    }
    (classes, props)
}

/// Rewrites axioms into the orientation the fact encoding expects and adds
/// `ca ⊑ ⊤` / `ra ⊑ ⊤` for every ABox class or property that never occurs in
/// the TBox.
pub fn normalize_ontology(o: &Ontology) -> Ontology {
    let tbox: BTreeSet<Axiom> = o.tbox.iter().cloned().map(normalize_axiom).collect();
    let (classes, props) = collect_tbox_symbols(&tbox);
    let mut out = Ontology {
        tbox,
        abox: o.abox.clone(),
        prefixes: o.prefixes.clone(),
    };
    for a in &o.abox {
        match a {
            Axiom::ClassAssertion(c, _) if !classes.contains(c) && !c.is_top_class() => {
                out.tbox.insert(Axiom::ClassInclusion(
                    ClassExpr::Atomic(c.clone()),
                    ClassExpr::Atomic(Entity::top_class()),
                ));
            }
            Axiom::PropAssertion(r, _, _) if !props.contains(r) && *r != Entity::top_property() => {
                out.tbox.insert(Axiom::PropInclusion(
                    PropExpr::Direct(r.clone()),
                    PropExpr::Direct(Entity::top_property()),
                ));
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Entity {
        Entity::new(&format!("http://ex/z#{s}")).unwrap()
    }

    fn atomic(s: &str) -> ClassExpr {
        ClassExpr::Atomic(e(s))
    }

    fn doc(body: &str) -> String {
        format!("Prefix(:=<http://ex/z#>)\nOntology(\n{body}\n)")
    }

    #[test]
    fn parses_subclass_axiom() {
        let o = parse_ontology(&doc("SubClassOf(:Eagle :Birds)")).unwrap();
        assert_eq!(
            o.tbox.into_iter().collect::<Vec<_>>(),
            vec![Axiom::ClassInclusion(atomic("Eagle"), atomic("Birds"))]
        );
    }

    #[test]
    fn parses_class_assertion_on_a_class_name() {
        let o = parse_ontology(&doc("ClassAssertion(:EndangeredSpecies :GoldenEagle)")).unwrap();
        assert_eq!(
            o.abox.into_iter().collect::<Vec<_>>(),
            vec![Axiom::ClassAssertion(
                e("EndangeredSpecies"),
                e("GoldenEagle")
            )]
        );
    }

    #[test]
    fn parses_empty_ontology() {
        let o = parse_ontology("Ontology()").unwrap();
        assert!(o.is_empty());
    }

    #[test]
    fn rewrites_sugar() {
        let o = parse_ontology(&doc("EquivalentClasses(:A :B)
             ObjectPropertyDomain(:r :A)
             ObjectPropertyRange(:r :B)
             InverseObjectProperties(:r :s)
             DisjointClasses(:A :B :C)
             DifferentIndividuals(:x :y :z)"))
        .unwrap();
        let r = PropExpr::Direct(e("r"));
        let s = PropExpr::Direct(e("s"));
        for ax in [
            Axiom::ClassInclusion(atomic("A"), atomic("B")),
            Axiom::ClassInclusion(atomic("B"), atomic("A")),
            Axiom::ClassInclusion(ClassExpr::exists(r.clone()), atomic("A")),
            Axiom::ClassInclusion(ClassExpr::exists(r.inverse()), atomic("B")),
            Axiom::PropInclusion(r.clone(), s.inverse()),
            Axiom::PropInclusion(s.clone(), r.inverse()),
            Axiom::ClassDisjoint(atomic("A"), atomic("B")),
            Axiom::ClassDisjoint(atomic("A"), atomic("C")),
            Axiom::ClassDisjoint(atomic("B"), atomic("C")),
        ] {
            assert!(o.tbox.contains(&ax), "missing {ax:?}");
        }
        assert_eq!(o.tbox.len(), 9);
        assert_eq!(o.abox.len(), 3);
    }

    #[test]
    fn double_inverse_is_normalized_at_parse_time() {
        let o = parse_ontology(&doc(
            "SubObjectPropertyOf(ObjectInverseOf(ObjectInverseOf(:r)) :s)",
        ))
        .unwrap();
        assert!(o.tbox.contains(&Axiom::PropInclusion(
            PropExpr::Direct(e("r")),
            PropExpr::Direct(e("s"))
        )));
    }

    #[test]
    fn rejects_features_outside_the_fragment() {
        for (body, kw) in [
            (
                "SubClassOf(:A ObjectMinCardinality(2 :r))",
                "ObjectMinCardinality",
            ),
            ("TransitiveObjectProperty(:r)", "TransitiveObjectProperty"),
            ("Import(<http://ex/other>)", "Import"),
            (
                "DataPropertyAssertion(:age :x \"3\")",
                "DataPropertyAssertion",
            ),
        ] {
            match parse_ontology(&doc(body)) {
                Err(OwlError::UnsupportedAxiom { keyword, .. }) => assert_eq!(keyword, kw),
                other => panic!("{body}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_ontology(&doc("SubClassOf(ObjectSomeValuesFrom(:r :B) :A)")),
            Err(OwlError::UnsupportedAxiom { .. })
        ));
    }

    #[test]
    fn reports_unknown_prefix_and_syntax_position() {
        assert_eq!(
            parse_ontology("Ontology(\nSubClassOf(foo:A foo:B))"),
            Err(OwlError::UnknownPrefix {
                prefix: "foo".into(),
                line: 2
            })
        );
        match parse_ontology("Ontology(\n  SubClassOf(<http://a> <http://b>\n") {
            Err(OwlError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ignores_declarations_annotations_and_comments() {
        let o = parse_ontology(&doc("# a comment
             Declaration(Class(:A))
             AnnotationAssertion(rdfs:label :A \"A class\"@en)
             SubClassOf(Annotation(rdfs:comment \"x\") :A :B) # trailing"))
        .unwrap();
        assert_eq!(o.len(), 1);
    }

    #[test]
    fn normalization_adds_top_inclusions() {
        let o = parse_ontology(&doc(
            "ClassAssertion(:C :a) ObjectPropertyAssertion(:r :a :b)",
        ))
        .unwrap();
        let n = normalize_ontology(&o);
        assert!(n.tbox.contains(&Axiom::ClassInclusion(
            atomic("C"),
            ClassExpr::Atomic(Entity::top_class())
        )));
        assert!(n.tbox.contains(&Axiom::PropInclusion(
            PropExpr::Direct(e("r")),
            PropExpr::Direct(Entity::top_property())
        )));
        assert_eq!(normalize_ontology(&n), n);
    }

    #[test]
    fn normalization_orients_disjointness_with_existential() {
        let mut o = Ontology::new();
        let ex = ClassExpr::exists(PropExpr::Direct(e("r")));
        o.insert(Axiom::ClassDisjoint(atomic("C"), ex.clone()));
        let n = normalize_ontology(&o);
        assert_eq!(
            n.tbox.into_iter().collect::<Vec<_>>(),
            vec![Axiom::ClassDisjoint(ex, atomic("C"))]
        );
    }

    #[test]
    fn serialization_round_trips() {
        let o = parse_ontology(&doc(
            "SubClassOf(:A ObjectSomeValuesFrom(ObjectInverseOf(:r) :B))
             SubClassOf(ObjectSomeValuesFrom(:r owl:Thing) :A)
             DisjointObjectProperties(:r ObjectInverseOf(:s))
             ReflexiveObjectProperty(:r) IrreflexiveObjectProperty(:s)
             ClassAssertion(:A :x) ObjectPropertyAssertion(:r :x :y)
             DifferentIndividuals(:x :y)",
        ))
        .unwrap();
        let again = parse_ontology(&o.to_functional()).unwrap();
        assert_eq!(again.tbox, o.tbox);
        assert_eq!(again.abox, o.abox);
    }
}
