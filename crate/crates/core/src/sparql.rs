//! Conjunctive SPARQL `SELECT` queries and their translation to Datalog.
//!
//! Variables may appear in subject, predicate and object position, and the
//! same variable may denote a class, a property and an individual at once.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{
    intern, Atom, Builtin, ConjunctiveQuery, Entity, ModelError, Pred, Prefixes, Rule, Term,
    OWL_NS, RDFS_NS, RDF_NS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SparqlError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unsupported SPARQL feature: {0}")]
    UnsupportedFeature(String),
    #[error("unknown prefix `{0}`")]
    UnknownPrefix(String),
    #[error("answer variable ?{0} does not occur in the WHERE block")]
    UnsafeQuery(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QTerm {
    Var(Arc<str>),
    Const(Entity),
}

impl fmt::Display for QTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QTerm::Var(v) => write!(f, "?{v}"),
            QTerm::Const(e) => write!(f, "<{}>", e.owl_iri()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub s: QTerm,
    pub p: QTerm,
    pub o: QTerm,
}

/// A parsed `SELECT` query: projection plus basic graph pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparqlQuery {
    pub answer_vars: Vec<Arc<str>>,
    pub patterns: Vec<TriplePattern>,
    pub distinct: bool,
}

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    Name(String),
    Var(String),
    Punct(char),
    Literal,
    Blank,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> SparqlError {
        SparqlError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, SparqlError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '<' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('>') => break,
                            Some(c) if !c.is_whitespace() => s.push(c),
                            _ => return Err(self.err("unterminated IRI")),
                        }
                    }
                    Tok::Iri(s)
                }
                '?' | '$' => {
                    self.bump();
                    let mut s = String::new();
                    while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                        s.push(c);
                        self.bump();
                    }
                    if s.is_empty() {
                        return Err(self.err("empty variable name"));
                    }
                    Tok::Var(s)
                }
                '"' | '\'' => {
                    self.bump();
                    while let Some(d) = self.bump() {
                        if d == '\\' {
                            self.bump();
                        } else if d == c {
                            break;
                        }
                    }
                    Tok::Literal
                }
                '[' => {
                    self.bump();
                    Tok::Blank
                }
                '{' | '}' | '.' | ';' | ',' | '*' | '(' | ')' | '/' | '|' | '^' | '+' | ']'
                | '!' | '=' => {
                    self.bump();
                    Tok::Punct(c)
                }
                c if c.is_alphanumeric() || c == '_' || c == ':' => {
                    let mut s = String::new();
                    while let Some(c) = self
                        .peek()
                        .filter(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '.'))
                    {
                        s.push(c);
                        self.bump();
                    }
                    // A trailing dot ends the triple rather than the name.
                    let dots = s.len() - s.trim_end_matches('.').len();
                    s.truncate(s.len() - dots);
                    out.push((self.classify(s), line, col));
                    for _ in 0..dots {
                        out.push((Tok::Punct('.'), self.line, self.col - 1));
                    }
                    continue;
                }
                other => return Err(self.err(format!("unexpected character {other:?}"))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }

    fn classify(&self, s: String) -> Tok {
        if s.starts_with("_:") {
            Tok::Blank
        } else if s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            Tok::Literal
        } else {
            Tok::Name(s)
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    prefixes: Prefixes,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn err(&self, msg: impl Into<String>) -> SparqlError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or((1, 1), |t| (t.1, t.2));
        SparqlError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Name(n)) if n.eq_ignore_ascii_case(kw))
    }

    fn expect_punct(&mut self, c: char) -> Result<(), SparqlError> {
        match self.peek() {
            Some(Tok::Punct(d)) if *d == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{c}`"))),
        }
    }

    fn entity(&self, name: &str) -> Result<Entity, SparqlError> {
        intern(name, &self.prefixes).map_err(|e| match e {
            ModelError::UnknownPrefix(p) => SparqlError::UnknownPrefix(p),
            other => self.err(other.to_string()),
        })
    }

    fn term(&mut self, predicate: bool) -> Result<QTerm, SparqlError> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(QTerm::Var(Arc::from(v))),
            Some(Tok::Iri(i)) => Ok(QTerm::Const(self.entity(&format!("<{i}>"))?)),
            Some(Tok::Name(n)) if predicate && n == "a" => {
                Ok(QTerm::Const(Entity::new(RDF_TYPE).expect("valid IRI")))
            }
            Some(Tok::Name(n)) if n.contains(':') => Ok(QTerm::Const(self.entity(&n)?)),
            Some(Tok::Blank) => Err(SparqlError::UnsupportedFeature("blank nodes".into())),
            Some(Tok::Literal) => Err(SparqlError::UnsupportedFeature("literals".into())),
            Some(Tok::Punct('(')) => Err(SparqlError::UnsupportedFeature("collections".into())),
            _ => {
                self.pos -= 1;
                Err(self.err("expected a variable, IRI or prefixed name"))
            }
        }
    }

    fn reject_path(&self) -> Result<(), SparqlError> {
        match self.peek() {
            Some(Tok::Punct('/' | '|' | '^' | '+' | '*' | '!')) => {
                Err(SparqlError::UnsupportedFeature("property paths".into()))
            }
            _ => Ok(()),
        }
    }

    fn reject_keywords(&self) -> Result<(), SparqlError> {
        for kw in [
            "OPTIONAL", "FILTER", "UNION", "MINUS", "BIND", "VALUES", "GRAPH", "SERVICE",
        ] {
            if self.keyword(kw) {
                return Err(SparqlError::UnsupportedFeature(kw.to_string()));
            }
        }
        Ok(())
    }

    fn query(mut self) -> Result<SparqlQuery, SparqlError> {
        while self.keyword("PREFIX") {
            self.pos += 1;
            let name = match self.next() {
                Some(Tok::Name(n)) if n.ends_with(':') => n[..n.len() - 1].to_string(),
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected prefix name ending in `:`"));
                }
            };
            let iri = match self.next() {
                Some(Tok::Iri(i)) => i,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected namespace IRI"));
                }
            };
            self.prefixes.insert(name, iri);
        }
        for kw in ["ASK", "CONSTRUCT", "DESCRIBE", "BASE"] {
            if self.keyword(kw) {
                return Err(SparqlError::UnsupportedFeature(kw.to_string()));
            }
        }
        if !self.keyword("SELECT") {
            return Err(self.err("expected SELECT"));
        }
        self.pos += 1;
        let distinct = self.keyword("DISTINCT");
        if distinct || self.keyword("REDUCED") {
            self.pos += 1;
        }
        let mut projection = Vec::new();
        let mut star = false;
        loop {
            match self.peek() {
                Some(Tok::Var(v)) => {
                    projection.push(Arc::<str>::from(v.as_str()));
                    self.pos += 1;
                }
                Some(Tok::Punct('*')) if projection.is_empty() && !star => {
                    star = true;
                    self.pos += 1;
                }
                Some(Tok::Punct('(')) => {
                    return Err(SparqlError::UnsupportedFeature(
                        "projection expressions".into(),
                    ))
                }
                _ => break,
            }
        }
        if projection.is_empty() && !star {
            return Err(self.err("expected projection variables or `*`"));
        }
        if self.keyword("WHERE") {
            self.pos += 1;
        }
        self.expect_punct('{')?;
        let mut patterns = Vec::new();
        loop {
            self.reject_keywords()?;
            match self.peek() {
                Some(Tok::Punct('}')) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Punct('{')) => {
                    return Err(SparqlError::UnsupportedFeature(
                        "nested group patterns".into(),
                    ))
                }
                None => return Err(self.err("unterminated WHERE block")),
                _ => {}
            }
            let s = self.term(false)?;
            loop {
                let p = self.term(true)?;
                self.reject_path()?;
                loop {
                    let o = self.term(false)?;
                    patterns.push(TriplePattern {
                        s: s.clone(),
                        p: p.clone(),
                        o,
                    });
                    if matches!(self.peek(), Some(Tok::Punct(','))) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if matches!(self.peek(), Some(Tok::Punct(';'))) {
                    self.pos += 1;
                    if matches!(self.peek(), Some(Tok::Punct('.' | '}'))) {
                        break;
                    }
                } else {
                    break;
                }
            }
            self.reject_keywords()?;
            match self.peek() {
                Some(Tok::Punct('.')) => self.pos += 1,
                Some(Tok::Punct('}')) => {}
                _ => return Err(self.err("expected `.` or `}` after triple pattern")),
            }
        }
        if self.keyword("ORDER")
            || self.keyword("LIMIT")
            || self.keyword("OFFSET")
            || self.keyword("GROUP")
        {
            return Err(SparqlError::UnsupportedFeature("solution modifiers".into()));
        }
        if self.pos < self.toks.len() {
            return Err(self.err("trailing input after WHERE block"));
        }
        if patterns.is_empty() {
            return Err(self.err("empty WHERE block"));
        }
        let answer_vars = if star {
            let mut vs: Vec<Arc<str>> = Vec::new();
            for t in &patterns {
                for x in [&t.s, &t.p, &t.o] {
                    if let QTerm::Var(v) = x {
                        if !vs.contains(v) {
                            vs.push(v.clone());
                        }
                    }
                }
            }
            vs
        } else {
            projection
        };
        Ok(SparqlQuery {
            answer_vars,
            patterns,
            distinct,
        })
    }
}

/// Parses `PREFIX` declarations followed by one conjunctive `SELECT` query.
pub fn parse_query(text: &str) -> Result<SparqlQuery, SparqlError> {
    let toks = Lexer::new(text).tokens()?;
    let prefixes = [("owl", OWL_NS), ("rdf", RDF_NS), ("rdfs", RDFS_NS)]
        .into_iter()
        .map(|(p, n)| (p.to_string(), n.to_string()))
        .collect();
    Parser {
        toks,
        pos: 0,
        prefixes,
    }
    .query()
}

/// The builtin a reserved predicate IRI maps to, `Ok(None)` for ordinary
/// properties.
fn reserved(p: &Entity) -> Result<Option<Builtin>, SparqlError> {
    let iri = p.iri();
    let local = [RDF_NS, RDFS_NS, OWL_NS]
        .iter()
        .find_map(|ns| iri.strip_prefix(ns));
    let Some(local) = local else { return Ok(None) };
    let b = match local.to_ascii_lowercase().as_str() {
        "type" if iri.starts_with(RDF_NS) => Builtin::Instc,
        "subclassof" if iri.starts_with(RDFS_NS) => Builtin::IsacCC,
        "subpropertyof" if iri.starts_with(RDFS_NS) => Builtin::IsarRR,
        "disjointwith" if iri.starts_with(OWL_NS) => Builtin::DisjcCC,
        "propertydisjointwith" if iri.starts_with(OWL_NS) => Builtin::DisjrRR,
        "differentfrom" if iri.starts_with(OWL_NS) => Builtin::Diff,
        _ => {
            return Err(SparqlError::UnsupportedFeature(format!(
                "schema predicate <{iri}>"
            )))
        }
    };
    Ok(Some(b))
}

/// Datalog variable names: capitalized, made unique on collision.
fn datalog_names(q: &SparqlQuery) -> HashMap<Arc<str>, Arc<str>> {
    let mut map: HashMap<Arc<str>, Arc<str>> = HashMap::new();
    let mut used: Vec<Arc<str>> = Vec::new();
    let order = q
        .answer_vars
        .iter()
        .cloned()
        .chain(q.patterns.iter().flat_map(|t| {
            [&t.s, &t.p, &t.o]
                .into_iter()
                .filter_map(|x| match x {
                    QTerm::Var(v) => Some(v.clone()),
                    QTerm::Const(_) => None,
                })
                .collect::<Vec<_>>()
        }));
    for v in order {
        if map.contains_key(&v) {
            continue;
        }
        let mut c = v.chars();
        let base: String = c
            .next()
            .map(|f| f.to_uppercase().chain(c).collect())
            .unwrap_or_default();
        let base = if base.starts_with(|ch: char| ch.is_ascii_digit() || ch == '_') {
            format!("V{base}")
        } else {
            base
        };
        let mut name = base.clone();
        let mut n = 1;
        while used.iter().any(|u| **u == *name) {
            name = format!("{base}_{n}");
            n += 1;
        }
        let name: Arc<str> = Arc::from(name);
        used.push(name.clone());
        map.insert(v, name);
    }
    map
}

/// Body atoms and answer variables of the Datalog-level query.
pub fn to_conjunctive(q: &SparqlQuery) -> Result<ConjunctiveQuery, SparqlError> {
    let names = datalog_names(q);
    let term = |t: &QTerm| match t {
        QTerm::Var(v) => Term::Var(names[v].clone()),
        QTerm::Const(e) => Term::Const(e.clone()),
    };
    let mut body = Vec::with_capacity(q.patterns.len());
    for t in &q.patterns {
        let (s, o) = (term(&t.s), term(&t.o));
        let builtin = match &t.p {
            QTerm::Const(p) => reserved(p)?,
            QTerm::Var(_) => None,
        };
        let atom = match builtin {
            Some(Builtin::Instc) => Atom::new(Builtin::Instc, vec![o, s]),
            Some(b) => Atom::new(b, vec![s, o]),
            None => Atom::new(Builtin::Instr, vec![term(&t.p), s, o]),
        }
        .expect("arity matches");
        body.push(atom);
    }
    let answer_vars = q.answer_vars.iter().map(|v| names[v].clone()).collect();
    ConjunctiveQuery::new(answer_vars, body).map_err(|e| match e {
        ModelError::UnsafeQuery { var } => {
            let orig = names
                .iter()
                .find(|(_, n)| ***n == *var)
                .map_or(var.clone(), |(o, _)| o.to_string());
            SparqlError::UnsafeQuery(orig)
        }
        other => SparqlError::Syntax {
            line: 0,
            col: 0,
            msg: other.to_string(),
        },
    })
}

/// Translates to a rule `q(V..) :- body` plus the atomic query `q(V..)`.
pub fn translate_query(q: &SparqlQuery) -> Result<(Rule, Atom), SparqlError> {
    let cq = to_conjunctive(q)?;
    let head = Atom {
        pred: Pred::aux("q", cq.answer_vars.len()),
        args: cq
            .answer_vars
            .iter()
            .map(|v| Term::Var(v.clone()))
            .collect(),
    };
    let rule = Rule::new(head.clone(), cq.body).expect("safety checked");
    Ok((rule, head))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRE: &str = "PREFIX : <http://ex/>\n";

    fn parse(body: &str) -> Result<SparqlQuery, SparqlError> {
        parse_query(&format!("{PRE}{body}"))
    }

    #[test]
    fn endangered_species_query_has_three_patterns() {
        let q = parse("SELECT ?z WHERE { ?y a :ES . ?z a ?y . ?z :Lives_in :CPZ }").unwrap();
        assert_eq!(q.patterns.len(), 3);
        assert_eq!(q.answer_vars, vec![Arc::<str>::from("z")]);
        assert_eq!(
            q.patterns[0].p,
            QTerm::Const(Entity::new(RDF_TYPE).unwrap())
        );
    }

    #[test]
    fn capitalized_subclass_predicate_is_accepted() {
        let q = parse("SELECT ?x ?y ?z WHERE { ?x rdf:type ?y . ?y rdfs:SubClassOf ?z }").unwrap();
        assert_eq!(q.patterns.len(), 2);
        let (rule, head) = translate_query(&q).unwrap();
        assert_eq!(rule.to_string(), "q(X,Y,Z) :- instc(Y,X), isacCC(Y,Z).");
        assert_eq!(head.to_string(), "q(X,Y,Z)");
    }

    #[test]
    fn empty_where_is_a_syntax_error() {
        assert!(matches!(
            parse("SELECT ?x WHERE { }"),
            Err(SparqlError::Syntax { .. })
        ));
    }

    #[test]
    fn meta_query_translation() {
        let q = parse("SELECT ?x WHERE { ?x a :c . ?y a ?x }").unwrap();
        let (rule, _) = translate_query(&q).unwrap();
        assert_eq!(
            rule.to_string(),
            "q(X) :- instc(\"http://ex/c\",X), instc(X,Y)."
        );
    }

    #[test]
    fn plain_property_pattern() {
        let q = parse("SELECT ?s ?o WHERE { ?s :p ?o }").unwrap();
        let (rule, _) = translate_query(&q).unwrap();
        assert_eq!(rule.to_string(), "q(S,O) :- instr(\"http://ex/p\",S,O).");
    }

    #[test]
    fn variable_in_every_position() {
        let q = parse("SELECT ?x WHERE { ?x a ?x . ?x ?x ?x . ?x rdfs:subClassOf ?x }").unwrap();
        let (rule, _) = translate_query(&q).unwrap();
        assert_eq!(rule.body.len(), 3);
        assert_eq!(rule.body[1].to_string(), "instr(X,X,X)");
    }

    #[test]
    fn reserved_predicates_map_to_builtins() {
        let q = parse(
            "SELECT * WHERE { ?a rdfs:subPropertyOf ?b . ?a owl:disjointWith ?c . \
             ?a owl:propertyDisjointWith ?d . ?a owl:differentFrom ?e }",
        )
        .unwrap();
        assert_eq!(q.answer_vars.len(), 5);
        let cq = to_conjunctive(&q).unwrap();
        let names: Vec<&str> = cq.body.iter().map(|a| a.pred.name()).collect();
        assert_eq!(names, ["isarRR", "disjcCC", "disjrRR", "diff"]);
    }

    #[test]
    fn unsupported_features_are_rejected() {
        for q in [
            "SELECT ?x WHERE { ?x a :c OPTIONAL { ?x :p ?y } }",
            "SELECT ?x WHERE { ?x a :c . FILTER (?x = :d) }",
            "SELECT ?x WHERE { { ?x a :c } UNION { ?x a :d } }",
            "SELECT ?x WHERE { ?x :p/:q ?y }",
            "SELECT ?x WHERE { ?x :p _:b }",
            "SELECT ?x WHERE { ?x :p \"lit\" }",
            "SELECT ?x WHERE { ?x owl:equivalentClass ?y }",
            "ASK { ?x a :c }",
        ] {
            assert!(
                matches!(parse(q), Err(SparqlError::UnsupportedFeature(_)))
                    || matches!(
                        parse(q).map(|q| to_conjunctive(&q)),
                        Ok(Err(SparqlError::UnsupportedFeature(_)))
                    ),
                "{q}"
            );
        }
    }

    #[test]
    fn unsafe_projection_is_reported() {
        let q = parse("SELECT ?w WHERE { ?x a :c }").unwrap();
        assert_eq!(
            translate_query(&q),
            Err(SparqlError::UnsafeQuery("w".into()))
        );
    }

    #[test]
    fn colliding_names_are_disambiguated() {
        let q = parse("SELECT ?x ?X WHERE { ?x :p ?X }").unwrap();
        let cq = to_conjunctive(&q).unwrap();
        assert_eq!(&*cq.answer_vars[0], "X");
        assert_eq!(&*cq.answer_vars[1], "X_1");
    }

    #[test]
    fn semicolon_and_comma_abbreviations() {
        let q = parse("SELECT ?x WHERE { ?x a :c , :d ; :p ?y . }").unwrap();
        assert_eq!(q.patterns.len(), 3);
    }

    #[test]
    fn unknown_prefix_is_reported() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?x a zz:c }"),
            Err(SparqlError::UnknownPrefix("zz".into()))
        );
    }
}
