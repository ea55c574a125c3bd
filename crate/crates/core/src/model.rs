//! Shared abstract syntax: entities, class and property expressions, axioms,
//! the fixed Datalog signature, and terms/atoms/rules/queries over it.
//!
//! Every name is an [`Entity`]. Under punning one entity may be used as a
//! class, a property and an individual at the same time; nothing here tracks
//! which roles a name plays.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";

pub const OWL_THING: &str = "http://www.w3.org/2002/07/owl#Thing";
pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";
pub const OWL_TOP_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#topObjectProperty";
pub const OWL_BOTTOM_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#bottomObjectProperty";

pub const TOP_CLASS_IRI: &str = "urn:metaql:top-class";
pub const BOTTOM_CLASS_IRI: &str = "urn:metaql:bottom-class";
pub const TOP_PROPERTY_IRI: &str = "urn:metaql:top-property";
pub const BOTTOM_PROPERTY_IRI: &str = "urn:metaql:bottom-property";

/// Prefix name (without the trailing colon) to namespace IRI.
pub type Prefixes = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("predicate {pred} expects {expected} arguments, got {got}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        got: usize,
    },
    #[error("unsafe rule: variable {var} in the head does not occur in the body")]
    UnsafeRule { var: String },
    #[error("unsafe query: answer variable {var} does not occur in the body")]
    UnsafeQuery { var: String },
    #[error("query body is empty")]
    EmptyQuery,
}

/// An IRI-denoted name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entity(Arc<str>);

impl Entity {
    /// Builds an entity from a fully expanded IRI.
    pub fn new(iri: &str) -> Result<Self, ModelError> {
        if iri.is_empty() || iri.chars().any(char::is_whitespace) {
            return Err(ModelError::InvalidIri(iri.to_string()));
        }
        Ok(Entity(Arc::from(reserved_alias(iri).unwrap_or(iri))))
    }

    pub fn iri(&self) -> &str {
        &self.0
    }

    pub fn top_class() -> Self {
        Entity(Arc::from(TOP_CLASS_IRI))
    }

    pub fn bottom_class() -> Self {
        Entity(Arc::from(BOTTOM_CLASS_IRI))
    }

    pub fn top_property() -> Self {
        Entity(Arc::from(TOP_PROPERTY_IRI))
    }

    pub fn bottom_property() -> Self {
        Entity(Arc::from(BOTTOM_PROPERTY_IRI))
    }

    pub fn is_top_class(&self) -> bool {
        &*self.0 == TOP_CLASS_IRI
    }

    /// The IRI to use when writing OWL files: reserved entities are spelled
    /// with their OWL vocabulary names.
    pub fn owl_iri(&self) -> &str {
        match &*self.0 {
            TOP_CLASS_IRI => OWL_THING,
            BOTTOM_CLASS_IRI => OWL_NOTHING,
            TOP_PROPERTY_IRI => OWL_TOP_OBJECT_PROPERTY,
            BOTTOM_PROPERTY_IRI => OWL_BOTTOM_OBJECT_PROPERTY,
            other => other,
        }
    }
}

impl fmt::Debug for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn reserved_alias(iri: &str) -> Option<&'static str> {
    match iri {
        OWL_THING => Some(TOP_CLASS_IRI),
        OWL_NOTHING => Some(BOTTOM_CLASS_IRI),
        OWL_TOP_OBJECT_PROPERTY => Some(TOP_PROPERTY_IRI),
        OWL_BOTTOM_OBJECT_PROPERTY => Some(BOTTOM_PROPERTY_IRI),
        _ => None,
    }
}

/// Resolves `<iri>`, `prefix:local` or `:local` to an [`Entity`].
pub fn intern(name: &str, prefixes: &Prefixes) -> Result<Entity, ModelError> {
    if let Some(inner) = name.strip_prefix('<') {
        let iri = inner
            .strip_suffix('>')
            .ok_or_else(|| ModelError::InvalidIri(name.to_string()))?;
        return Entity::new(iri);
    }
    let (prefix, local) = name
        .split_once(':')
        .ok_or_else(|| ModelError::InvalidIri(name.to_string()))?;
    let ns = prefixes
        .get(prefix)
        .ok_or_else(|| ModelError::UnknownPrefix(prefix.to_string()))?;
    Entity::new(&format!("{ns}{local}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropExpr {
    Direct(Entity),
    Inverse(Entity),
}

impl PropExpr {
    pub fn prop(&self) -> &Entity {
        match self {
            PropExpr::Direct(p) | PropExpr::Inverse(p) => p,
        }
    }

    pub fn is_inverse(&self) -> bool {
        matches!(self, PropExpr::Inverse(_))
    }

    /// `r` becomes `r⁻` and `r⁻` becomes `r`; a double inverse never exists.
    pub fn inverse(&self) -> PropExpr {
        match self {
            PropExpr::Direct(p) => PropExpr::Inverse(p.clone()),
            PropExpr::Inverse(p) => PropExpr::Direct(p.clone()),
        }
    }
}

/// The three kinds of basic concept: atomic class, `∃r`, `∃r⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    C,
    R,
    I,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::C, Kind::R, Kind::I];

    pub fn letter(self) -> char {
        match self {
            Kind::C => 'C',
            Kind::R => 'R',
            Kind::I => 'I',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    Atomic(Entity),
    /// `∃prop.filler`; unqualified `∃r` has filler ⊤.
    Some {
        prop: PropExpr,
        filler: Entity,
    },
}

impl ClassExpr {
    pub fn exists(prop: PropExpr) -> Self {
        ClassExpr::Some {
            prop,
            filler: Entity::top_class(),
        }
    }

    /// Kind of this expression when read as a basic concept, or `None` for a
    /// qualified existential.
    pub fn basic_kind(&self) -> Option<Kind> {
        match self {
            ClassExpr::Atomic(_) => Some(Kind::C),
            ClassExpr::Some { prop, filler } if filler.is_top_class() => {
                Some(if prop.is_inverse() { Kind::I } else { Kind::R })
            }
            ClassExpr::Some { .. } => None,
        }
    }

    /// Kind of this expression on the right of an inclusion (fillers allowed).
    pub fn rhs_kind(&self) -> Kind {
        match self {
            ClassExpr::Atomic(_) => Kind::C,
            ClassExpr::Some { prop, .. } if prop.is_inverse() => Kind::I,
            ClassExpr::Some { .. } => Kind::R,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    ClassInclusion(ClassExpr, ClassExpr),
    PropInclusion(PropExpr, PropExpr),
    ClassDisjoint(ClassExpr, ClassExpr),
    PropDisjoint(PropExpr, PropExpr),
    Reflexive(Entity),
    Irreflexive(Entity),
    ClassAssertion(Entity, Entity),
    PropAssertion(Entity, Entity, Entity),
    DifferentIndividuals(Entity, Entity),
}

impl Axiom {
    pub fn is_abox(&self) -> bool {
        matches!(
            self,
            Axiom::ClassAssertion(..) | Axiom::PropAssertion(..) | Axiom::DifferentIndividuals(..)
        )
    }
}

macro_rules! builtins {
    ($($variant:ident => $name:literal / $arity:literal),* $(,)?) => {
        /// The fixed predicate vocabulary plus the auxiliaries `named` and
        /// `violation`.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Builtin { $($variant),* }

        impl Builtin {
            pub const ALL: &'static [Builtin] = &[$(Builtin::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Builtin::$variant => $name),* }
            }

            pub fn arity(self) -> usize {
                match self { $(Builtin::$variant => $arity),* }
            }

            pub fn from_name(name: &str) -> Option<Builtin> {
                match name { $($name => Some(Builtin::$variant),)* _ => None }
            }
        }
    };
}

builtins! {
    IsacCC => "isacCC" / 2,
    IsacCR => "isacCR" / 3,
    IsacCI => "isacCI" / 3,
    IsacRC => "isacRC" / 2,
    IsacRR => "isacRR" / 3,
    IsacRI => "isacRI" / 3,
    IsacIC => "isacIC" / 2,
    IsacIR => "isacIR" / 3,
    IsacII => "isacII" / 3,
    IsarRR => "isarRR" / 2,
    IsarRI => "isarRI" / 2,
    Refl => "refl" / 1,
    DisjrRR => "disjrRR" / 2,
    DisjrRI => "disjrRI" / 2,
    DisjcCC => "disjcCC" / 2,
    DisjcCI => "disjcCI" / 2,
    DisjcRC => "disjcRC" / 2,
    DisjcRR => "disjcRR" / 2,
    DisjcRI => "disjcRI" / 2,
    DisjcIC => "disjcIC" / 2,
    DisjcIR => "disjcIR" / 2,
    DisjcII => "disjcII" / 2,
    Irrefl => "irrefl" / 1,
    Instc => "instc" / 2,
    Instr => "instr" / 3,
    Diff => "diff" / 2,
    Named => "named" / 1,
    Violation => "violation" / 0,
}

impl Builtin {
    /// `isac⟨lhs⟩⟨rhs⟩`.
    pub fn isac(lhs: Kind, rhs: Kind) -> Builtin {
        use Kind::*;
        match (lhs, rhs) {
            (C, C) => Builtin::IsacCC,
            (C, R) => Builtin::IsacCR,
            (C, I) => Builtin::IsacCI,
            (R, C) => Builtin::IsacRC,
            (R, R) => Builtin::IsacRR,
            (R, I) => Builtin::IsacRI,
            (I, C) => Builtin::IsacIC,
            (I, R) => Builtin::IsacIR,
            (I, I) => Builtin::IsacII,
        }
    }

    /// `disjc⟨a⟩⟨b⟩`; there is no `disjcCR`, so `(C, R)` is `None`.
    pub fn disjc(a: Kind, b: Kind) -> Option<Builtin> {
        use Kind::*;
        Some(match (a, b) {
            (C, C) => Builtin::DisjcCC,
            (C, R) => return None,
            (C, I) => Builtin::DisjcCI,
            (R, C) => Builtin::DisjcRC,
            (R, R) => Builtin::DisjcRR,
            (R, I) => Builtin::DisjcRI,
            (I, C) => Builtin::DisjcIC,
            (I, R) => Builtin::DisjcIR,
            (I, I) => Builtin::DisjcII,
        })
    }

    /// The 26 predicates that axioms translate to and rules derive.
    pub fn is_signature(self) -> bool {
        !matches!(self, Builtin::Named | Builtin::Violation)
    }
}

/// A predicate symbol: a builtin or an auxiliary (query heads, magic
/// predicates) with an explicit arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Builtin(Builtin),
    Aux { name: Arc<str>, arity: usize },
}

impl Pred {
    pub fn aux(name: &str, arity: usize) -> Pred {
        Pred::Aux {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Pred::Builtin(b) => b.name(),
            Pred::Aux { name, .. } => name,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Pred::Builtin(b) => b.arity(),
            Pred::Aux { arity, .. } => *arity,
        }
    }

    /// Builtin when the name is one, auxiliary otherwise.
    pub fn parse(name: &str, arity: usize) -> Pred {
        match Builtin::from_name(name) {
            Some(b) => Pred::Builtin(b),
            None => Pred::aux(name, arity),
        }
    }
}

impl From<Builtin> for Pred {
    fn from(b: Builtin) -> Self {
        Pred::Builtin(b)
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Entity),
    Var(Arc<str>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl From<Entity> for Term {
    fn from(e: Entity) -> Self {
        Term::Const(e)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(e) => write_quoted(f, e.iri()),
            Term::Var(v) => f.write_str(v),
        }
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        if c == '"' || c == '\\' {
            f.write_char('\\')?;
        }
        f.write_char(c)?;
    }
    f.write_char('"')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<Pred>, args: Vec<Term>) -> Result<Self, ModelError> {
        let pred = pred.into();
        if pred.arity() != args.len() {
            return Err(ModelError::ArityMismatch {
                pred: pred.name().to_string(),
                expected: pred.arity(),
                got: args.len(),
            });
        }
        Ok(Atom { pred, args })
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pred.name())?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A ground atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fact {
    pub pred: Pred,
    pub args: Vec<Entity>,
}

impl Fact {
    pub fn new(pred: impl Into<Pred>, args: Vec<Entity>) -> Result<Self, ModelError> {
        let pred = pred.into();
        if pred.arity() != args.len() {
            return Err(ModelError::ArityMismatch {
                pred: pred.name().to_string(),
                expected: pred.arity(),
                got: args.len(),
            });
        }
        Ok(Fact { pred, args })
    }

    pub fn to_atom(&self) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().cloned().map(Term::Const).collect(),
        }
    }
}

// Facts sort by predicate name, then argument IRIs.
impl Ord for Fact {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pred
            .name()
            .cmp(other.pred.name())
            .then_with(|| self.args.cmp(&other.args))
    }
}

impl PartialOrd for Fact {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.", self.to_atom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Rule {
    /// Builds a rule, rejecting heads with variables missing from the body.
    pub fn new(head: Atom, body: Vec<Atom>) -> Result<Self, ModelError> {
        let bound: BTreeSet<&str> = body.iter().flat_map(Atom::vars).collect();
        if let Some(v) = head.vars().find(|v| !bound.contains(v)) {
            return Err(ModelError::UnsafeRule { var: v.to_string() });
        }
        Ok(Rule { head, body })
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

/// A Datalog-level conjunctive query: answer variables plus body atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctiveQuery {
    pub answer_vars: Vec<Arc<str>>,
    pub body: Vec<Atom>,
}

impl ConjunctiveQuery {
    pub fn new(answer_vars: Vec<Arc<str>>, body: Vec<Atom>) -> Result<Self, ModelError> {
        if body.is_empty() {
            return Err(ModelError::EmptyQuery);
        }
        let bound: BTreeSet<&str> = body.iter().flat_map(Atom::vars).collect();
        if let Some(v) = answer_vars.iter().find(|v| !bound.contains(&***v)) {
            return Err(ModelError::UnsafeQuery { var: v.to_string() });
        }
        Ok(ConjunctiveQuery { answer_vars, body })
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("q(")?;
        for (i, v) in self.answer_vars.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(v)?;
        }
        f.write_str(") :- ")?;
        for (i, b) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefixes(pairs: &[(&str, &str)]) -> Prefixes {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn intern_expands_prefixed_names() {
        let p = prefixes(&[("ub", "http://ex/u#")]);
        assert_eq!(
            intern("ub:Professor", &p).unwrap().iri(),
            "http://ex/u#Professor"
        );
    }

    #[test]
    fn intern_accepts_full_iris() {
        assert_eq!(
            intern("<http://ex/a>", &Prefixes::new()).unwrap().iri(),
            "http://ex/a"
        );
    }

    #[test]
    fn intern_uses_default_prefix() {
        let p = prefixes(&[("", "http://ex/z#")]);
        assert_eq!(
            intern(":GoldenEagle", &p).unwrap().iri(),
            "http://ex/z#GoldenEagle"
        );
    }

    #[test]
    fn intern_rejects_unknown_prefix() {
        assert_eq!(
            intern("foo:Bar", &Prefixes::new()),
            Err(ModelError::UnknownPrefix("foo".into()))
        );
    }

    #[test]
    fn intern_is_idempotent_on_expanded_iris() {
        let p = prefixes(&[("ub", "http://ex/u#")]);
        let e = intern("ub:Professor", &p).unwrap();
        assert_eq!(intern(&format!("<{}>", e.iri()), &p).unwrap(), e);
    }

    #[test]
    fn owl_thing_maps_to_reserved_top() {
        let p = prefixes(&[("owl", OWL_NS)]);
        assert_eq!(intern("owl:Thing", &p).unwrap(), Entity::top_class());
        assert_eq!(intern("owl:Nothing", &p).unwrap(), Entity::bottom_class());
        assert_eq!(
            intern("owl:topObjectProperty", &p).unwrap(),
            Entity::top_property()
        );
        assert_eq!(
            intern("owl:bottomObjectProperty", &p).unwrap(),
            Entity::bottom_property()
        );
        assert_eq!(Entity::top_class().owl_iri(), OWL_THING);
    }

    #[test]
    fn entity_rejects_whitespace_and_empty() {
        assert!(Entity::new("").is_err());
        assert!(Entity::new("http://ex/a b").is_err());
    }

    #[test]
    fn atom_arity_is_checked() {
        let a = Entity::new("http://ex/a").unwrap();
        let err = Atom::new(Builtin::Instc, vec![Term::Const(a)]).unwrap_err();
        assert!(matches!(
            err,
            ModelError::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            }
        ));
    }

    #[test]
    fn inverse_twice_is_identity() {
        let p = PropExpr::Direct(Entity::new("http://ex/p").unwrap());
        assert_eq!(p.inverse().inverse(), p);
        assert_eq!(p.inverse().inverse().inverse(), p.inverse());
    }

    #[test]
    fn unsafe_rule_is_rejected() {
        let head = Atom::new(Builtin::Named, vec![Term::var("X")]).unwrap();
        let body = vec![Atom::new(Builtin::Refl, vec![Term::var("Y")]).unwrap()];
        assert_eq!(
            Rule::new(head, body),
            Err(ModelError::UnsafeRule { var: "X".into() })
        );
    }

    #[test]
    fn every_builtin_round_trips_by_name() {
        assert_eq!(Builtin::ALL.iter().filter(|b| b.is_signature()).count(), 26);
        for b in Builtin::ALL {
            assert_eq!(Builtin::from_name(b.name()), Some(*b));
        }
    }

    #[test]
    fn rule_display_is_datalog_text() {
        let x = Term::var("X");
        let c = Term::Const(Entity::new("http://ex/C").unwrap());
        let r = Rule::new(
            Atom::new(Builtin::Named, vec![x.clone()]).unwrap(),
            vec![Atom::new(Builtin::Instc, vec![c, x]).unwrap()],
        )
        .unwrap();
        assert_eq!(r.to_string(), r#"named(X) :- instc("http://ex/C",X)."#);
    }
}
