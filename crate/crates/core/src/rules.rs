//! The fixed positive rule base that saturates the encoded TBox and derives
//! instance facts.
//!
//! Rules are generated family by family over the kind alphabet `{C, R, I}`
//! rather than written out by hand; [`RuleCatalogue::stats`] reports the
//! per-family counts.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::model::{Atom, Builtin, Entity, Kind, Rule, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    TboxChainAtomic,
    TboxChainExist,
    TboxFiller,
    TboxRoleLift,
    RoleTrans,
    DisjSym,
    DisjDown,
    AboxClass,
    AboxRole,
    AboxRefl,
    AuxNamed,
    Violation,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::TboxChainAtomic => "TBOX-CHAIN-ATOMIC",
            Family::TboxChainExist => "TBOX-CHAIN-EXIST",
            Family::TboxFiller => "TBOX-FILLER",
            Family::TboxRoleLift => "TBOX-ROLE-LIFT",
            Family::RoleTrans => "ROLE-TRANS",
            Family::DisjSym => "DISJ-SYM",
            Family::DisjDown => "DISJ-DOWN",
            Family::AboxClass => "ABOX-CLASS",
            Family::AboxRole => "ABOX-ROLE",
            Family::AboxRefl => "ABOX-REFL",
            Family::AuxNamed => "AUX-NAMED",
            Family::Violation => "VIOLATION",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Default)]
pub struct RuleCatalogue {
    pub rules: Vec<Rule>,
    pub families: Vec<Family>,
}

impl RuleCatalogue {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rule, Family)> {
        self.rules.iter().zip(self.families.iter().copied())
    }

    /// Copy of the catalogue with the consistency-violation reporters added.
    pub fn with_violation_rules(&self) -> RuleCatalogue {
        let mut out = self.clone();
        let mut g = Gen { out: &mut out };
        g.violation();
        out
    }

    pub fn stats(&self) -> BTreeMap<Family, usize> {
        let mut m = BTreeMap::new();
        for f in &self.families {
            *m.entry(*f).or_default() += 1;
        }
        m
    }

    /// `.dl` text, one rule per line.
    pub fn to_dl(&self) -> String {
        let mut s = String::new();
        for r in &self.rules {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

/// The rule base without violation reporters. Generated once and shared.
pub fn builtin_rules() -> &'static RuleCatalogue {
    static CATALOGUE: OnceLock<RuleCatalogue> = OnceLock::new();
    CATALOGUE.get_or_init(generate)
}

fn generate() -> RuleCatalogue {
    let mut out = RuleCatalogue::default();
    let mut g = Gen { out: &mut out };
    g.chain_atomic();
    g.chain_exist();
    g.filler();
    g.role_lift();
    g.role_trans();
    g.disj_sym();
    g.disj_down();
    g.abox();
    out
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn top() -> Term {
    Term::Const(Entity::top_class())
}

fn atom(b: Builtin, args: Vec<Term>) -> Atom {
    Atom::new(b, args).expect("generated atoms match the signature arity")
}

/// Right-hand argument list for a kind: `[c]` or `[r, filler]`.
fn rhs_args(k: Kind, base: &str) -> Vec<Term> {
    match k {
        Kind::C => vec![v(base)],
        Kind::R | Kind::I => vec![v(&format!("{base}p")), v(&format!("{base}f"))],
    }
}

fn isac(l: Kind, r: Kind, lhs: Term, rhs: Vec<Term>) -> Atom {
    let mut args = vec![lhs];
    args.extend(rhs);
    atom(Builtin::isac(l, r), args)
}

/// Disjointness of two basic concepts, in whichever argument order the
/// signature provides (`disjcCR` does not exist, so `(C, R)` is flipped).
fn disj(k1: Kind, a1: Term, k2: Kind, a2: Term) -> Atom {
    match Builtin::disjc(k1, k2) {
        Some(b) => atom(b, vec![a1, a2]),
        None => atom(
            Builtin::disjc(k2, k1).expect("reverse orientation exists"),
            vec![a2, a1],
        ),
    }
}

struct Gen<'a> {
    out: &'a mut RuleCatalogue,
}

impl Gen<'_> {
    fn push(&mut self, family: Family, head: Atom, body: Vec<Atom>) {
        let rule = Rule::new(head, body).expect("generated rules are safe");
        self.out.rules.push(rule);
        self.out.families.push(family);
    }

    // l ⊑ c, c ⊑ k  ⇒  l ⊑ k
    fn chain_atomic(&mut self) {
        for l in Kind::ALL {
            for k in Kind::ALL {
                let head = isac(l, k, v("X"), rhs_args(k, "Y"));
                let body = vec![
                    isac(l, Kind::C, v("X"), vec![v("M")]),
                    isac(Kind::C, k, v("M"), rhs_args(k, "Y")),
                ];
                self.push(Family::TboxChainAtomic, head, body);
            }
        }
    }

    // l ⊑ ∃r.f, ∃r ⊑ k  ⇒  l ⊑ k   (and the ∃r⁻ variant)
    fn chain_exist(&mut self) {
        for l in Kind::ALL {
            for k in Kind::ALL {
                for via in [Kind::R, Kind::I] {
                    let head = isac(l, k, v("X"), rhs_args(k, "Y"));
                    let body = vec![
                        isac(l, via, v("X"), vec![v("P"), v("F")]),
                        isac(via, k, v("P"), rhs_args(k, "Y")),
                    ];
                    self.push(Family::TboxChainExist, head, body);
                }
            }
        }
    }

    // Filler weakening: through a subclass, through the role's range, and to ⊤.
    fn filler(&mut self) {
        for l in Kind::ALL {
            for via in [Kind::R, Kind::I] {
                let base = || isac(l, via, v("X"), vec![v("P"), v("F")]);
                self.push(
                    Family::TboxFiller,
                    isac(l, via, v("X"), vec![v("P"), v("G")]),
                    vec![base(), atom(Builtin::IsacCC, vec![v("F"), v("G")])],
                );
                // The filler of ∃r sits in the range of r, i.e. in ∃r⁻.
                let range = if via == Kind::R {
                    Builtin::IsacIC
                } else {
                    Builtin::IsacRC
                };
                self.push(
                    Family::TboxFiller,
                    isac(l, via, v("X"), vec![v("P"), v("G")]),
                    vec![base(), atom(range, vec![v("P"), v("G")])],
                );
                self.push(
                    Family::TboxFiller,
                    isac(l, via, v("X"), vec![v("P"), top()]),
                    vec![base()],
                );
            }
        }
    }

    fn role_lift(&mut self) {
        // l ⊑ ∃p.f, p ⊑ q  ⇒  l ⊑ ∃q.f, with every inverse combination.
        for l in Kind::ALL {
            for (from, isar, to) in [
                (Kind::R, Builtin::IsarRR, Kind::R),
                (Kind::I, Builtin::IsarRR, Kind::I),
                (Kind::R, Builtin::IsarRI, Kind::I),
                (Kind::I, Builtin::IsarRI, Kind::R),
            ] {
                self.push(
                    Family::TboxRoleLift,
                    isac(l, to, v("X"), vec![v("Q"), v("F")]),
                    vec![
                        isac(l, from, v("X"), vec![v("P"), v("F")]),
                        atom(isar, vec![v("P"), v("Q")]),
                    ],
                );
            }
        }
        // p ⊑ q  ⇒  ∃p ⊑ ∃q and ∃p⁻ ⊑ ∃q⁻;  p ⊑ q⁻  ⇒  ∃p ⊑ ∃q⁻ and ∃p⁻ ⊑ ∃q.
        for (isar, l, r) in [
            (Builtin::IsarRR, Kind::R, Kind::R),
            (Builtin::IsarRR, Kind::I, Kind::I),
            (Builtin::IsarRI, Kind::R, Kind::I),
            (Builtin::IsarRI, Kind::I, Kind::R),
        ] {
            self.push(
                Family::TboxRoleLift,
                isac(l, r, v("P"), vec![v("Q"), top()]),
                vec![atom(isar, vec![v("P"), v("Q")])],
            );
        }
        for isar in [Builtin::IsarRR, Builtin::IsarRI] {
            self.push(
                Family::TboxRoleLift,
                atom(Builtin::Refl, vec![v("Q")]),
                vec![
                    atom(Builtin::Refl, vec![v("P")]),
                    atom(isar, vec![v("P"), v("Q")]),
                ],
            );
        }
    }

    fn role_trans(&mut self) {
        use Builtin::{IsarRI as RI, IsarRR as RR};
        for (head, first, second) in [(RR, RR, RR), (RI, RR, RI), (RI, RI, RR), (RR, RI, RI)] {
            self.push(
                Family::RoleTrans,
                atom(head, vec![v("P"), v("R")]),
                vec![
                    atom(first, vec![v("P"), v("Q")]),
                    atom(second, vec![v("Q"), v("R")]),
                ],
            );
        }
    }

    fn disj_sym(&mut self) {
        use Builtin::*;
        for (from, to) in [
            (DisjcCC, DisjcCC),
            (DisjcRR, DisjcRR),
            (DisjcII, DisjcII),
            (DisjcRI, DisjcIR),
            (DisjcIR, DisjcRI),
            (DisjcCI, DisjcIC),
            (DisjcIC, DisjcCI),
            (DisjrRR, DisjrRR),
            (DisjrRI, DisjrRI),
        ] {
            self.push(
                Family::DisjSym,
                atom(to, vec![v("B"), v("A")]),
                vec![atom(from, vec![v("A"), v("B")])],
            );
        }
    }

    fn disj_down(&mut self) {
        // l ⊑ m, m disjoint n  ⇒  l disjoint n
        for l in Kind::ALL {
            for m in Kind::ALL {
                for n in Kind::ALL {
                    let sub = match m {
                        Kind::C => isac(l, m, v("X"), vec![v("M")]),
                        _ => isac(l, m, v("X"), vec![v("M"), v("F")]),
                    };
                    self.push(
                        Family::DisjDown,
                        disj(l, v("X"), n, v("N")),
                        vec![sub, disj(m, v("M"), n, v("N"))],
                    );
                }
            }
        }
        use Builtin::*;
        for (isar, from, to) in [
            (IsarRR, DisjrRR, DisjrRR),
            (IsarRR, DisjrRI, DisjrRI),
            (IsarRI, DisjrRR, DisjrRI),
            (IsarRI, DisjrRI, DisjrRR),
        ] {
            self.push(
                Family::DisjDown,
                atom(to, vec![v("S"), v("Q")]),
                vec![
                    atom(isar, vec![v("S"), v("P")]),
                    atom(from, vec![v("P"), v("Q")]),
                ],
            );
        }
        for isar in [IsarRR, IsarRI] {
            self.push(
                Family::DisjDown,
                atom(Irrefl, vec![v("S")]),
                vec![atom(isar, vec![v("S"), v("P")]), atom(Irrefl, vec![v("P")])],
            );
        }
    }

    fn abox(&mut self) {
        use Builtin::*;
        let (x, y) = (v("X"), v("Y"));
        self.push(
            Family::AboxClass,
            atom(Instc, vec![v("D"), x.clone()]),
            vec![
                atom(Instc, vec![v("C"), x.clone()]),
                atom(IsacCC, vec![v("C"), v("D")]),
            ],
        );
        self.push(
            Family::AboxClass,
            atom(Instc, vec![v("C"), x.clone()]),
            vec![
                atom(Instr, vec![v("R"), x.clone(), y.clone()]),
                atom(IsacRC, vec![v("R"), v("C")]),
            ],
        );
        self.push(
            Family::AboxClass,
            atom(Instc, vec![v("C"), y.clone()]),
            vec![
                atom(Instr, vec![v("R"), x.clone(), y.clone()]),
                atom(IsacIC, vec![v("R"), v("C")]),
            ],
        );
        self.push(
            Family::AboxRole,
            atom(Instr, vec![v("S"), x.clone(), y.clone()]),
            vec![
                atom(Instr, vec![v("R"), x.clone(), y.clone()]),
                atom(IsarRR, vec![v("R"), v("S")]),
            ],
        );
        self.push(
            Family::AboxRole,
            atom(Instr, vec![v("S"), y.clone(), x.clone()]),
            vec![
                atom(Instr, vec![v("R"), x.clone(), y.clone()]),
                atom(IsarRI, vec![v("R"), v("S")]),
            ],
        );
        let named = |t: &Term| atom(Named, vec![t.clone()]);
        self.push(
            Family::AuxNamed,
            named(&x),
            vec![atom(Instc, vec![v("C"), x.clone()])],
        );
        self.push(
            Family::AuxNamed,
            named(&x),
            vec![atom(Instr, vec![v("R"), x.clone(), y.clone()])],
        );
        self.push(
            Family::AuxNamed,
            named(&y),
            vec![atom(Instr, vec![v("R"), x.clone(), y.clone()])],
        );
        self.push(
            Family::AuxNamed,
            named(&x),
            vec![atom(Diff, vec![x.clone(), y.clone()])],
        );
        self.push(
            Family::AuxNamed,
            named(&y),
            vec![atom(Diff, vec![x.clone(), y.clone()])],
        );
        self.push(
            Family::AuxNamed,
            atom(Instc, vec![top(), x.clone()]),
            vec![named(&x)],
        );
        self.push(
            Family::AboxRefl,
            atom(Instr, vec![v("R"), x.clone(), x.clone()]),
            vec![atom(Refl, vec![v("R")]), named(&x)],
        );
    }

    fn violation(&mut self) {
        use Builtin::*;
        let (x, y) = (v("X"), v("Y"));
        let head = || atom(Violation, vec![]);
        self.push(
            Family::Violation,
            head(),
            vec![
                atom(Instc, vec![v("C"), x.clone()]),
                atom(Instc, vec![v("D"), x.clone()]),
                atom(DisjcCC, vec![v("C"), v("D")]),
            ],
        );
        self.push(
            Family::Violation,
            head(),
            vec![
                atom(Instr, vec![v("R"), x.clone(), y.clone()]),
                atom(Instr, vec![v("S"), x.clone(), y.clone()]),
                atom(DisjrRR, vec![v("R"), v("S")]),
            ],
        );
        self.push(
            Family::Violation,
            head(),
            vec![
                atom(Instr, vec![v("R"), x.clone(), x.clone()]),
                atom(Irrefl, vec![v("R")]),
            ],
        );
    }
}

/// True when `a` and `b` are the same rule up to a consistent, injective
/// renaming of variables.
pub fn equal_up_to_renaming(a: &Rule, b: &Rule) -> bool {
    use std::collections::HashMap;
    if a.body.len() != b.body.len() {
        return false;
    }
    let mut fwd: HashMap<&str, &str> = HashMap::new();
    let mut back: HashMap<&str, &str> = HashMap::new();
    let atoms = std::iter::once((&a.head, &b.head)).chain(a.body.iter().zip(&b.body));
    for (x, y) in atoms {
        if x.pred != y.pred || x.args.len() != y.args.len() {
            return false;
        }
        for (s, t) in x.args.iter().zip(&y.args) {
            match (s, t) {
                (Term::Const(c), Term::Const(d)) if c == d => {}
                (Term::Var(p), Term::Var(q)) => {
                    if *fwd.entry(p).or_insert(q) != &**q || *back.entry(q).or_insert(p) != &**p {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pred;

    #[test]
    fn catalogue_contains_chain_anchor_rule() {
        let anchor = Rule::new(
            Atom::new(Builtin::IsacCR, vec![v("C1"), v("R2"), v("C2")]).unwrap(),
            vec![
                Atom::new(Builtin::IsacCC, vec![v("C1"), v("C3")]).unwrap(),
                Atom::new(Builtin::IsacCR, vec![v("C3"), v("R2"), v("C2")]).unwrap(),
            ],
        )
        .unwrap();
        assert!(builtin_rules()
            .rules
            .iter()
            .any(|r| equal_up_to_renaming(r, &anchor)));
    }

    #[test]
    fn catalogue_contains_instance_inheritance_rule() {
        let rule = Rule::new(
            Atom::new(Builtin::Instc, vec![v("C2"), v("X")]).unwrap(),
            vec![
                Atom::new(Builtin::Instc, vec![v("C1"), v("X")]).unwrap(),
                Atom::new(Builtin::IsacCC, vec![v("C1"), v("C2")]).unwrap(),
            ],
        )
        .unwrap();
        assert!(builtin_rules()
            .rules
            .iter()
            .any(|r| equal_up_to_renaming(r, &rule)));
    }

    #[test]
    fn every_rule_is_safe_and_positive() {
        for r in &builtin_rules().with_violation_rules().rules {
            assert!(Rule::new(r.head.clone(), r.body.clone()).is_ok(), "{r}");
            assert!(!r.body.is_empty());
            match &r.head.pred {
                Pred::Builtin(_) => {}
                other => panic!("head outside the signature: {other}"),
            }
        }
    }

    #[test]
    fn family_counts_are_stable() {
        let stats = builtin_rules().stats();
        let expect = [
            (Family::TboxChainAtomic, 9),
            (Family::TboxChainExist, 18),
            (Family::TboxFiller, 18),
            (Family::TboxRoleLift, 18),
            (Family::RoleTrans, 4),
            (Family::DisjSym, 9),
            (Family::DisjDown, 33),
            (Family::AboxClass, 3),
            (Family::AboxRole, 2),
            (Family::AboxRefl, 1),
            (Family::AuxNamed, 6),
        ];
        assert_eq!(stats, expect.into_iter().collect());
        assert_eq!(builtin_rules().len(), 121);
        assert_eq!(builtin_rules().with_violation_rules().len(), 124);
    }

    #[test]
    fn renaming_check_is_injective() {
        let a = Rule::new(
            Atom::new(Builtin::IsacCC, vec![v("X"), v("Y")]).unwrap(),
            vec![Atom::new(Builtin::IsacCC, vec![v("X"), v("Y")]).unwrap()],
        )
        .unwrap();
        let b = Rule::new(
            Atom::new(Builtin::IsacCC, vec![v("X"), v("X")]).unwrap(),
            vec![Atom::new(Builtin::IsacCC, vec![v("X"), v("X")]).unwrap()],
        )
        .unwrap();
        assert!(!equal_up_to_renaming(&a, &b));
        assert!(equal_up_to_renaming(&a, &a));
    }
}
