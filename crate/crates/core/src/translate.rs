//! Axiom-to-fact encoding.
//!
//! Each normalized axiom becomes exactly one ground fact. Inclusions are keyed
//! on the kinds of their two sides (`C` atomic, `R` for `∃r`, `I` for `∃r⁻`);
//! a qualified right-hand existential carries its filler as last argument,
//! and an unqualified one carries ⊤. Argument order follows the table
//! convention `instc(class, individual)`, `instr(property, subject, object)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Axiom, Builtin, ClassExpr, Entity, Fact, Kind, Pred, PropExpr};
use crate::owl::Ontology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("axiom is not in normalized form: {0:?}")]
    NonNormalizedAxiom(Axiom),
    #[error("fact does not encode an axiom: {0}")]
    NotAnAxiomFact(Fact),
}

/// Schema facts and data facts of one ontology, each sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactBase {
    pub tbox_facts: BTreeSet<Fact>,
    pub abox_facts: BTreeSet<Fact>,
}

impl FactBase {
    pub fn len(&self) -> usize {
        self.tbox_facts.len() + self.abox_facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbox_facts.is_empty() && self.abox_facts.is_empty()
    }

    /// All facts in canonical order (predicate name, then arguments).
    pub fn facts(&self) -> Vec<Fact> {
        let mut all: Vec<Fact> = self
            .tbox_facts
            .iter()
            .chain(&self.abox_facts)
            .cloned()
            .collect();
        all.sort();
        all
    }

    pub fn to_dl(&self) -> String {
        facts_to_dl(&self.facts())
    }
}

/// One fact per line, `pred("iri",...).`, LF-terminated.
pub fn facts_to_dl<'a>(facts: impl IntoIterator<Item = &'a Fact>) -> String {
    let mut out = String::new();
    for f in facts {
        let _ = writeln!(out, "{f}");
    }
    out
}

fn fact(b: Builtin, args: Vec<Entity>) -> Fact {
    Fact {
        pred: Pred::Builtin(b),
        args,
    }
}

fn lhs(c: &ClassExpr) -> Option<(Kind, Entity)> {
    let kind = c.basic_kind()?;
    Some(match c {
        ClassExpr::Atomic(e) => (kind, e.clone()),
        ClassExpr::Some { prop, .. } => (kind, prop.prop().clone()),
    })
}

fn rhs(c: &ClassExpr) -> (Kind, Vec<Entity>) {
    match c {
        ClassExpr::Atomic(e) => (Kind::C, vec![e.clone()]),
        ClassExpr::Some { prop, filler } => {
            (c.rhs_kind(), vec![prop.prop().clone(), filler.clone()])
        }
    }
}

/// Encodes a single normalized axiom.
pub fn tau(axiom: &Axiom) -> Result<Fact, TranslateError> {
    let bad = || TranslateError::NonNormalizedAxiom(axiom.clone());
    Ok(match axiom {
        Axiom::ClassInclusion(b, c) => {
            let (lk, l) = lhs(b).ok_or_else(bad)?;
            let (rk, mut r) = rhs(c);
            r.insert(0, l);
            fact(Builtin::isac(lk, rk), r)
        }
        Axiom::PropInclusion(PropExpr::Direct(p), q) => fact(
            if q.is_inverse() {
                Builtin::IsarRI
            } else {
                Builtin::IsarRR
            },
            vec![p.clone(), q.prop().clone()],
        ),
        Axiom::PropDisjoint(PropExpr::Direct(p), q) => fact(
            if q.is_inverse() {
                Builtin::DisjrRI
            } else {
                Builtin::DisjrRR
            },
            vec![p.clone(), q.prop().clone()],
        ),
        Axiom::PropInclusion(..) | Axiom::PropDisjoint(..) => return Err(bad()),
        Axiom::ClassDisjoint(b1, b2) => {
            let (k1, e1) = lhs(b1).ok_or_else(bad)?;
            let (k2, e2) = lhs(b2).ok_or_else(bad)?;
            fact(Builtin::disjc(k1, k2).ok_or_else(bad)?, vec![e1, e2])
        }
        Axiom::Reflexive(p) => fact(Builtin::Refl, vec![p.clone()]),
        Axiom::Irreflexive(p) => fact(Builtin::Irrefl, vec![p.clone()]),
        Axiom::ClassAssertion(c, i) => fact(Builtin::Instc, vec![c.clone(), i.clone()]),
        Axiom::PropAssertion(r, x, y) => {
            fact(Builtin::Instr, vec![r.clone(), x.clone(), y.clone()])
        }
        Axiom::DifferentIndividuals(x, y) => fact(Builtin::Diff, vec![x.clone(), y.clone()]),
    })
}

fn kind_of_isac(b: Builtin) -> Option<(Kind, Kind)> {
    Kind::ALL
        .iter()
        .flat_map(|&l| Kind::ALL.iter().map(move |&r| (l, r)))
        .find(|&(l, r)| Builtin::isac(l, r) == b)
}

fn kind_of_disjc(b: Builtin) -> Option<(Kind, Kind)> {
    Kind::ALL
        .iter()
        .flat_map(|&l| Kind::ALL.iter().map(move |&r| (l, r)))
        .find(|&(l, r)| Builtin::disjc(l, r) == Some(b))
}

fn basic(kind: Kind, e: &Entity) -> ClassExpr {
    match kind {
        Kind::C => ClassExpr::Atomic(e.clone()),
        Kind::R => ClassExpr::exists(PropExpr::Direct(e.clone())),
        Kind::I => ClassExpr::exists(PropExpr::Inverse(e.clone())),
    }
}

/// Inverse of [`tau`]: rebuilds the axiom a fact encodes.
pub fn untau(f: &Fact) -> Result<Axiom, TranslateError> {
    let bad = || TranslateError::NotAnAxiomFact(f.clone());
    let Pred::Builtin(b) = &f.pred else {
        return Err(bad());
    };
    let a = &f.args;
    if a.len() != b.arity() {
        return Err(bad());
    }
    if let Some((lk, rk)) = kind_of_isac(*b) {
        let rhs = match rk {
            Kind::C => ClassExpr::Atomic(a[1].clone()),
            Kind::R => ClassExpr::Some {
                prop: PropExpr::Direct(a[1].clone()),
                filler: a[2].clone(),
            },
            Kind::I => ClassExpr::Some {
                prop: PropExpr::Inverse(a[1].clone()),
                filler: a[2].clone(),
            },
        };
        return Ok(Axiom::ClassInclusion(basic(lk, &a[0]), rhs));
    }
    if let Some((k1, k2)) = kind_of_disjc(*b) {
        return Ok(Axiom::ClassDisjoint(basic(k1, &a[0]), basic(k2, &a[1])));
    }
    let direct = |e: &Entity| PropExpr::Direct(e.clone());
    let inverse = |e: &Entity| PropExpr::Inverse(e.clone());
    Ok(match b {
        Builtin::IsarRR => Axiom::PropInclusion(direct(&a[0]), direct(&a[1])),
        Builtin::IsarRI => Axiom::PropInclusion(direct(&a[0]), inverse(&a[1])),
        Builtin::DisjrRR => Axiom::PropDisjoint(direct(&a[0]), direct(&a[1])),
        Builtin::DisjrRI => Axiom::PropDisjoint(direct(&a[0]), inverse(&a[1])),
        Builtin::Refl => Axiom::Reflexive(a[0].clone()),
        Builtin::Irrefl => Axiom::Irreflexive(a[0].clone()),
        Builtin::Instc => Axiom::ClassAssertion(a[0].clone(), a[1].clone()),
        Builtin::Instr => Axiom::PropAssertion(a[0].clone(), a[1].clone(), a[2].clone()),
        Builtin::Diff => Axiom::DifferentIndividuals(a[0].clone(), a[1].clone()),
        _ => return Err(bad()),
    })
}

/// Encodes every axiom of a normalized ontology.
pub fn translate_ontology(o: &Ontology) -> Result<FactBase, TranslateError> {
    let tbox_facts = o.tbox.iter().map(tau).collect::<Result<_, _>>()?;
    let abox_facts = o.abox.iter().map(tau).collect::<Result<_, _>>()?;
    Ok(FactBase {
        tbox_facts,
        abox_facts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owl::{normalize_ontology, parse_ontology};

    fn e(s: &str) -> Entity {
        Entity::new(&format!("http://ex/{s}")).unwrap()
    }

    #[test]
    fn class_inclusion_is_isac_cc() {
        let f = tau(&Axiom::ClassInclusion(
            ClassExpr::Atomic(e("c1")),
            ClassExpr::Atomic(e("c2")),
        ))
        .unwrap();
        assert_eq!(f, fact(Builtin::IsacCC, vec![e("c1"), e("c2")]));
    }

    #[test]
    fn qualified_existential_carries_filler() {
        let ax = Axiom::ClassInclusion(
            ClassExpr::Atomic(e("c1")),
            ClassExpr::Some {
                prop: PropExpr::Direct(e("r2")),
                filler: e("c2"),
            },
        );
        assert_eq!(
            tau(&ax).unwrap(),
            fact(Builtin::IsacCR, vec![e("c1"), e("r2"), e("c2")])
        );
    }

    #[test]
    fn assertions_follow_table_argument_order() {
        assert_eq!(
            tau(&Axiom::ClassAssertion(e("GoldenEagle"), e("Harry"))).unwrap(),
            fact(Builtin::Instc, vec![e("GoldenEagle"), e("Harry")])
        );
        assert_eq!(
            tau(&Axiom::PropAssertion(e("r"), e("x"), e("y"))).unwrap(),
            fact(Builtin::Instr, vec![e("r"), e("x"), e("y")])
        );
        assert_eq!(
            tau(&Axiom::DifferentIndividuals(e("x"), e("y"))).unwrap(),
            fact(Builtin::Diff, vec![e("x"), e("y")])
        );
    }

    #[test]
    fn non_normalized_axioms_are_rejected() {
        let inv = Axiom::PropInclusion(PropExpr::Inverse(e("r")), PropExpr::Direct(e("s")));
        assert!(matches!(
            tau(&inv),
            Err(TranslateError::NonNormalizedAxiom(_))
        ));
        let cr = Axiom::ClassDisjoint(
            ClassExpr::Atomic(e("c")),
            ClassExpr::exists(PropExpr::Direct(e("r"))),
        );
        assert!(matches!(
            tau(&cr),
            Err(TranslateError::NonNormalizedAxiom(_))
        ));
        let qualified_lhs = Axiom::ClassInclusion(
            ClassExpr::Some {
                prop: PropExpr::Direct(e("r")),
                filler: e("c"),
            },
            ClassExpr::Atomic(e("d")),
        );
        assert!(tau(&qualified_lhs).is_err());
    }

    #[test]
    fn empty_ontology_gives_empty_fact_base() {
        assert!(translate_ontology(&Ontology::new()).unwrap().is_empty());
    }

    #[test]
    fn golden_eagle_facts() {
        let o = parse_ontology(
            "Prefix(:=<http://ex/>)
             Ontology(
               SubClassOf(:Eagle :Birds)
               SubClassOf(:GoldenEagle :Eagle)
               ClassAssertion(:GoldenEagle :Harry)
               ClassAssertion(:EndangeredSpecies :GoldenEagle))",
        )
        .unwrap();
        let fb = translate_ontology(&normalize_ontology(&o)).unwrap();
        let want = [
            fact(Builtin::IsacCC, vec![e("Eagle"), e("Birds")]),
            fact(Builtin::IsacCC, vec![e("GoldenEagle"), e("Eagle")]),
            fact(Builtin::Instc, vec![e("GoldenEagle"), e("Harry")]),
            fact(
                Builtin::Instc,
                vec![e("EndangeredSpecies"), e("GoldenEagle")],
            ),
            fact(
                Builtin::IsacCC,
                vec![e("EndangeredSpecies"), Entity::top_class()],
            ),
        ];
        for f in &want {
            assert!(fb.facts().contains(f), "missing {f}");
        }
        assert_eq!(fb.len(), want.len());
        assert_eq!(
            fb.to_dl().lines().next().unwrap(),
            r#"instc("http://ex/EndangeredSpecies","http://ex/GoldenEagle")."#
        );
    }
}
