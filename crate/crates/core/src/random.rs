//! Seeded random ontologies and queries for differential testing.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::model::{
    Atom, Axiom, Builtin, ClassExpr, ConjunctiveQuery, Entity, Fact, Pred, PropExpr, Rule, Term,
};
use crate::owl::Ontology;

#[derive(Debug, Clone, Copy)]
pub struct RandomConfig {
    pub classes: usize,
    pub properties: usize,
    pub individuals: usize,
    pub tbox_axioms: usize,
    pub abox_axioms: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            classes: 8,
            properties: 4,
            individuals: 6,
            tbox_axioms: 14,
            abox_axioms: 30,
        }
    }
}

const NS: &str = "http://example.org/rand#";

fn ent(kind: &str, i: usize) -> Entity {
    Entity::new(&format!("{NS}{kind}{i}")).expect("valid IRI")
}

pub fn class(i: usize) -> Entity {
    ent("C", i)
}

pub fn property(i: usize) -> Entity {
    ent("p", i)
}

pub fn individual(i: usize) -> Entity {
    ent("i", i)
}

fn role<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> PropExpr {
    let p = property(rng.random_range(0..cfg.properties));
    if rng.random_bool(0.3) {
        PropExpr::Inverse(p)
    } else {
        PropExpr::Direct(p)
    }
}

fn basic<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> ClassExpr {
    if rng.random_bool(0.65) {
        ClassExpr::Atomic(class(rng.random_range(0..cfg.classes)))
    } else {
        ClassExpr::exists(role(rng, cfg))
    }
}

/// Individuals are drawn partly from class names, so class assertions can
/// talk about classes.
fn member<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Entity {
    if rng.random_bool(0.25) {
        class(rng.random_range(0..cfg.classes))
    } else {
        individual(rng.random_range(0..cfg.individuals))
    }
}

/// A random (not yet normalized) ontology within the limits of `cfg`.
pub fn random_ontology<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Ontology {
    let mut o = Ontology::new();
    let n_tbox = rng.random_range(0..=cfg.tbox_axioms);
    for _ in 0..n_tbox {
        let ax = match rng.random_range(0..100) {
            0..=44 => Axiom::ClassInclusion(basic(rng, cfg), basic(rng, cfg)),
            45..=59 => {
                let filler = if rng.random_bool(0.5) {
                    class(rng.random_range(0..cfg.classes))
                } else {
                    Entity::top_class()
                };
                Axiom::ClassInclusion(
                    basic(rng, cfg),
                    ClassExpr::Some {
                        prop: role(rng, cfg),
                        filler,
                    },
                )
            }
            60..=74 => Axiom::PropInclusion(role(rng, cfg), role(rng, cfg)),
            75..=84 => Axiom::ClassDisjoint(basic(rng, cfg), basic(rng, cfg)),
            85..=91 => Axiom::PropDisjoint(role(rng, cfg), role(rng, cfg)),
            92..=95 => Axiom::Reflexive(property(rng.random_range(0..cfg.properties))),
            _ => Axiom::Irreflexive(property(rng.random_range(0..cfg.properties))),
        };
        o.insert(ax);
    }
    let n_abox = rng.random_range(0..=cfg.abox_axioms);
    for _ in 0..n_abox {
        let ax = match rng.random_range(0..100) {
            0..=49 => {
                Axiom::ClassAssertion(class(rng.random_range(0..cfg.classes)), member(rng, cfg))
            }
            50..=89 => Axiom::PropAssertion(
                property(rng.random_range(0..cfg.properties)),
                member(rng, cfg),
                member(rng, cfg),
            ),
            _ => Axiom::DifferentIndividuals(member(rng, cfg), member(rng, cfg)),
        };
        o.insert(ax);
    }
    o
}

/// A random conjunctive query of one to `max_atoms` atoms over the
/// vocabulary of `cfg`.
pub fn random_query<R: Rng>(rng: &mut R, cfg: &RandomConfig, max_atoms: usize) -> ConjunctiveQuery {
    const VARS: [&str; 4] = ["X", "Y", "Z", "W"];
    loop {
        let n = rng.random_range(1..=max_atoms);
        let mut body = Vec::with_capacity(n);
        for _ in 0..n {
            let var = |rng: &mut R| Term::var(VARS.choose(rng).expect("nonempty"));
            let pick = |rng: &mut R, constant: Entity| {
                if rng.random_bool(0.7) {
                    var(rng)
                } else {
                    Term::Const(constant)
                }
            };
            let c = class(rng.random_range(0..cfg.classes));
            let p = property(rng.random_range(0..cfg.properties));
            let m = member(rng, cfg);
            let m2 = member(rng, cfg);
            let c2 = class(rng.random_range(0..cfg.classes));
            let p2 = property(rng.random_range(0..cfg.properties));
            let atom = match rng.random_range(0..100) {
                0..=39 => Atom::new(Builtin::Instc, vec![pick(rng, c), pick(rng, m)]),
                40..=69 => Atom::new(
                    Builtin::Instr,
                    vec![pick(rng, p), pick(rng, m), pick(rng, m2)],
                ),
                70..=79 => Atom::new(Builtin::IsacCC, vec![pick(rng, c), pick(rng, c2)]),
                80..=84 => Atom::new(
                    Builtin::IsacCR,
                    vec![pick(rng, c), pick(rng, p), pick(rng, c2)],
                ),
                85..=89 => Atom::new(Builtin::IsarRR, vec![pick(rng, p), pick(rng, p2)]),
                90..=94 => Atom::new(Builtin::DisjcCC, vec![pick(rng, c), pick(rng, c2)]),
                _ => Atom::new(Builtin::Named, vec![pick(rng, m)]),
            }
            .expect("arity matches");
            body.push(atom);
        }
        let mut vars: Vec<Arc<str>> = Vec::new();
        for a in &body {
            for v in a.vars() {
                if !vars.iter().any(|w| &**w == v) {
                    vars.push(Arc::from(v));
                }
            }
        }
        let answer: Vec<Arc<str>> = vars.into_iter().filter(|_| rng.random_bool(0.6)).collect();
        if let Ok(q) = ConjunctiveQuery::new(answer, body) {
            return q;
        }
    }
}

/// A random safe positive program over auxiliary predicates, with its input facts.
pub fn random_program<R: Rng>(rng: &mut R) -> (Vec<Fact>, Vec<Rule>) {
    const VARS: [&str; 4] = ["X", "Y", "Z", "W"];
    let preds: Vec<Pred> = (0..rng.random_range(2..=5))
        .map(|i| Pred::aux(&format!("p{i}"), rng.random_range(1..=3)))
        .collect();
    let constant = |rng: &mut R| ent("c", rng.random_range(0..5));
    let mut facts = Vec::new();
    for _ in 0..rng.random_range(0..=25) {
        let p = preds.choose(rng).expect("nonempty").clone();
        let args = (0..p.arity()).map(|_| constant(rng)).collect();
        facts.push(Fact::new(p, args).expect("arity matches"));
    }
    let mut rules = Vec::new();
    for _ in 0..rng.random_range(1..=6) {
        let body: Vec<Atom> = (0..rng.random_range(1..=3))
            .map(|_| {
                let p = preds.choose(rng).expect("nonempty").clone();
                let args = (0..p.arity())
                    .map(|_| {
                        if rng.random_bool(0.85) {
                            Term::var(VARS.choose(rng).expect("nonempty"))
                        } else {
                            Term::Const(constant(rng))
                        }
                    })
                    .collect();
                Atom::new(p, args).expect("arity matches")
            })
            .collect();
        let vars: Vec<String> = body
            .iter()
            .flat_map(|a| a.vars().map(str::to_string))
            .collect();
        let head_pred = preds.choose(rng).expect("nonempty").clone();
        let head_args = (0..head_pred.arity())
            .map(|_| match vars.choose(rng) {
                Some(v) if rng.random_bool(0.9) => Term::var(v),
                _ => Term::Const(constant(rng)),
            })
            .collect();
        let head = Atom::new(head_pred, head_args).expect("arity matches");
        rules.push(Rule::new(head, body).expect("head variables come from the body"));
    }
    (facts, rules)
}
