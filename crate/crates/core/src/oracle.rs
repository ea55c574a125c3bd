//! Reference semantics used to test the rule base and the engine.
//!
//! [`tbox_closure`] saturates inclusions with structured, pairwise composition
//! steps and shares no code with the rule catalogue. [`chase`] builds a
//! canonical model with labelled nulls, and [`Oracle`] answers conjunctive
//! queries over both by exhaustive backtracking.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::model::{
    Axiom, Builtin, ClassExpr, ConjunctiveQuery, Entity, Fact, Pred, PropExpr, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("chase exceeded depth {0}: the existential dependencies of the TBox are cyclic")]
    CyclicTBox(usize),
}

/// Default chase depth bound.
pub const DEFAULT_MAX_DEPTH: usize = 32;

/// Chases growing past this many elements are reported as cyclic as well.
pub const MAX_ELEMENTS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basic {
    Class(Entity),
    Exists(PropExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rhs {
    Class(Entity),
    Exists(PropExpr, Entity),
}

impl Rhs {
    fn basic(&self) -> Basic {
        match self {
            Rhs::Class(c) => Basic::Class(c.clone()),
            Rhs::Exists(r, _) => Basic::Exists(r.clone()),
        }
    }
}

fn basic_of(c: &ClassExpr) -> Basic {
    match c {
        ClassExpr::Atomic(a) => Basic::Class(a.clone()),
        ClassExpr::Some { prop, .. } => Basic::Exists(prop.clone()),
    }
}

fn rhs_of(c: &ClassExpr) -> Rhs {
    match c {
        ClassExpr::Atomic(a) => Rhs::Class(a.clone()),
        ClassExpr::Some { prop, filler } => Rhs::Exists(prop.clone(), filler.clone()),
    }
}

/// Saturated TBox: inclusions, role hierarchy, reflexivity and disjointness.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Closure {
    pub inclusions: BTreeSet<(Basic, Rhs)>,
    /// Closed under transitivity and under inverting both sides.
    pub roles: BTreeSet<(PropExpr, PropExpr)>,
    pub reflexive: BTreeSet<Entity>,
    pub irreflexive: BTreeSet<Entity>,
    /// Symmetric.
    pub class_disjoint: BTreeSet<(Basic, Basic)>,
    /// Symmetric and closed under inverting both sides.
    pub role_disjoint: BTreeSet<(PropExpr, PropExpr)>,
}

fn letter(b: &Basic) -> char {
    match b {
        Basic::Class(_) => 'C',
        Basic::Exists(PropExpr::Direct(_)) => 'R',
        Basic::Exists(PropExpr::Inverse(_)) => 'I',
    }
}

fn name_of(b: &Basic) -> Entity {
    match b {
        Basic::Class(c) => c.clone(),
        Basic::Exists(r) => r.prop().clone(),
    }
}

fn mk(name: &str, args: Vec<Entity>) -> Option<Fact> {
    Builtin::from_name(name).map(|b| Fact {
        pred: Pred::Builtin(b),
        args,
    })
}

impl Closure {
    /// The closure in the fact encoding: one fact per inclusion, property
    /// relations only with a direct left side, and disjointness only where
    /// the signature has a predicate for that orientation.
    pub fn facts(&self) -> BTreeSet<Fact> {
        let mut out = BTreeSet::new();
        for (b, x) in &self.inclusions {
            let (r, mut args) = match x {
                Rhs::Class(c) => ('C', vec![c.clone()]),
                Rhs::Exists(p, f) => (
                    letter(&Basic::Exists(p.clone())),
                    vec![p.prop().clone(), f.clone()],
                ),
            };
            args.insert(0, name_of(b));
            out.extend(mk(&format!("isac{}{r}", letter(b)), args));
        }
        let role_pairs =
            |set: &BTreeSet<(PropExpr, PropExpr)>, stem: &str, out: &mut BTreeSet<Fact>| {
                for (p, q) in set {
                    if let PropExpr::Direct(p) = p {
                        let suffix = if q.is_inverse() { "RI" } else { "RR" };
                        out.extend(mk(
                            &format!("{stem}{suffix}"),
                            vec![p.clone(), q.prop().clone()],
                        ));
                    }
                }
            };
        role_pairs(&self.roles, "isar", &mut out);
        role_pairs(&self.role_disjoint, "disjr", &mut out);
        for p in &self.reflexive {
            out.extend(mk("refl", vec![p.clone()]));
        }
        for p in &self.irreflexive {
            out.extend(mk("irrefl", vec![p.clone()]));
        }
        for (a, b) in &self.class_disjoint {
            out.extend(mk(
                &format!("disjc{}{}", letter(a), letter(b)),
                vec![name_of(a), name_of(b)],
            ));
        }
        out
    }
}

fn inv_pair(p: &PropExpr, q: &PropExpr) -> (PropExpr, PropExpr) {
    (p.inverse(), q.inverse())
}

/// Saturates a normalized TBox by repeated pairwise composition.
pub fn tbox_closure(o: &crate::owl::Ontology) -> Closure {
    let mut c = Closure::default();
    let mut incl_in = Vec::new();
    let mut refl_in = Vec::new();
    let mut irrefl_in = Vec::new();
    for a in &o.tbox {
        match a {
            Axiom::ClassInclusion(b, x) => incl_in.push((basic_of(b), rhs_of(x))),
            Axiom::PropInclusion(p, q) => {
                c.roles.insert((p.clone(), q.clone()));
                c.roles.insert(inv_pair(p, q));
            }
            Axiom::ClassDisjoint(x, y) => {
                c.class_disjoint.insert((basic_of(x), basic_of(y)));
                c.class_disjoint.insert((basic_of(y), basic_of(x)));
            }
            Axiom::PropDisjoint(p, q) => {
                for (x, y) in [(p, q), (q, p)] {
                    c.role_disjoint.insert((x.clone(), y.clone()));
                    c.role_disjoint.insert(inv_pair(x, y));
                }
            }
            Axiom::Reflexive(p) => refl_in.push(p.clone()),
            Axiom::Irreflexive(p) => irrefl_in.push(p.clone()),
            _ => {}
        }
    }

    // Role hierarchy: transitive closure.
    loop {
        let mut succ: HashMap<&PropExpr, Vec<&PropExpr>> = HashMap::new();
        for (p, q) in &c.roles {
            succ.entry(p).or_default().push(q);
        }
        let mut add = Vec::new();
        for (p, q) in &c.roles {
            for r in succ.get(q).into_iter().flatten() {
                if !c.roles.contains(&(p.clone(), (*r).clone())) {
                    add.push((p.clone(), (*r).clone()));
                }
            }
        }
        if add.is_empty() {
            break;
        }
        c.roles.extend(add);
    }
    let mut roles_from: HashMap<&PropExpr, Vec<&PropExpr>> = HashMap::new();
    for (p, q) in &c.roles {
        roles_from.entry(p).or_default().push(q);
    }

    c.reflexive.extend(refl_in);
    c.irreflexive.extend(irrefl_in);
    loop {
        let mut changed = false;
        for (p, q) in &c.roles {
            if c.reflexive.contains(p.prop()) && !c.reflexive.contains(q.prop()) {
                c.reflexive.insert(q.prop().clone());
                changed = true;
                break;
            }
            if c.irreflexive.contains(q.prop()) && !c.irreflexive.contains(p.prop()) {
                c.irreflexive.insert(p.prop().clone());
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }

    // Role disjointness propagates to sub-roles.
    loop {
        let mut add = Vec::new();
        for (s, p) in &c.roles {
            for (p2, q) in &c.role_disjoint {
                if p2 == p {
                    for (x, y) in [(s.clone(), q.clone()), (q.clone(), s.clone())] {
                        let i = inv_pair(&x, &y);
                        for pair in [(x.clone(), y.clone()), i] {
                            if !c.role_disjoint.contains(&pair) {
                                add.push(pair);
                            }
                        }
                    }
                }
            }
        }
        if add.is_empty() {
            break;
        }
        c.role_disjoint.extend(add);
    }

    // Class inclusions.
    let top = Entity::top_class();
    c.inclusions.extend(incl_in);
    for (p, q) in &c.roles {
        c.inclusions.insert((
            Basic::Exists(p.clone()),
            Rhs::Exists(q.clone(), top.clone()),
        ));
    }
    loop {
        let mut by_lhs: HashMap<&Basic, Vec<&Rhs>> = HashMap::new();
        for (b, x) in &c.inclusions {
            by_lhs.entry(b).or_default().push(x);
        }
        let mut add: Vec<(Basic, Rhs)> = Vec::new();
        let mut push = |b: &Basic, x: Rhs| {
            if !c.inclusions.contains(&(b.clone(), x.clone())) {
                add.push((b.clone(), x));
            }
        };
        for (b, x) in &c.inclusions {
            for y in by_lhs.get(&x.basic()).into_iter().flatten() {
                push(b, (*y).clone());
            }
            if let Rhs::Exists(r, f) = x {
                push(b, Rhs::Exists(r.clone(), top.clone()));
                let fillers = by_lhs
                    .get(&Basic::Class(f.clone()))
                    .into_iter()
                    .flatten()
                    .chain(
                        by_lhs
                            .get(&Basic::Exists(r.inverse()))
                            .into_iter()
                            .flatten(),
                    );
                for y in fillers {
                    if let Rhs::Class(g) = y {
                        push(b, Rhs::Exists(r.clone(), g.clone()));
                    }
                }
                for s in roles_from.get(r).into_iter().flatten() {
                    push(b, Rhs::Exists((*s).clone(), f.clone()));
                }
            }
        }
        if add.is_empty() {
            break;
        }
        c.inclusions.extend(add);
    }

    // Class disjointness propagates to sub-concepts.
    loop {
        let mut add = Vec::new();
        for (b, x) in &c.inclusions {
            let m = x.basic();
            for (m2, n) in &c.class_disjoint {
                if *m2 == m {
                    for pair in [(b.clone(), n.clone()), (n.clone(), b.clone())] {
                        if !c.class_disjoint.contains(&pair) {
                            add.push(pair);
                        }
                    }
                }
            }
        }
        if add.is_empty() {
            break;
        }
        c.class_disjoint.extend(add);
    }
    c
}

/// A domain element of the canonical model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Named(Entity),
    Null(u32),
}

impl Elem {
    pub fn named(&self) -> Option<&Entity> {
        match self {
            Elem::Named(e) => Some(e),
            Elem::Null(_) => None,
        }
    }
}

/// Chase result: named individuals plus labelled nulls `null_k`, numbered in
/// creation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalModel {
    pub elements: BTreeSet<Elem>,
    pub class_ext: BTreeMap<Entity, BTreeSet<Elem>>,
    pub prop_ext: BTreeMap<Entity, BTreeSet<(Elem, Elem)>>,
    /// Deepest null created.
    pub depth: usize,
}

impl CanonicalModel {
    fn edges(&self, r: &PropExpr) -> Vec<(Elem, Elem)> {
        let Some(set) = self.prop_ext.get(r.prop()) else {
            return Vec::new();
        };
        match r {
            PropExpr::Direct(_) => set.iter().cloned().collect(),
            PropExpr::Inverse(_) => set.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    fn has_edge(&self, r: &PropExpr, x: &Elem, y: &Elem) -> bool {
        let Some(set) = self.prop_ext.get(r.prop()) else {
            return false;
        };
        match r {
            PropExpr::Direct(_) => set.contains(&(x.clone(), y.clone())),
            PropExpr::Inverse(_) => set.contains(&(y.clone(), x.clone())),
        }
    }

    fn add_edge(&mut self, r: &PropExpr, x: Elem, y: Elem) -> bool {
        let pair = match r {
            PropExpr::Direct(_) => (x, y),
            PropExpr::Inverse(_) => (y, x),
        };
        self.prop_ext
            .entry(r.prop().clone())
            .or_default()
            .insert(pair)
    }

    fn in_class(&self, c: &Entity, e: &Elem) -> bool {
        c.is_top_class() || self.class_ext.get(c).is_some_and(|s| s.contains(e))
    }

    fn add_to_class(&mut self, c: &Entity, e: Elem) -> bool {
        self.class_ext.entry(c.clone()).or_default().insert(e)
    }

    fn ext(&self, b: &Basic) -> BTreeSet<Elem> {
        match b {
            Basic::Class(c) if c.is_top_class() => self.elements.clone(),
            Basic::Class(c) => self.class_ext.get(c).cloned().unwrap_or_default(),
            Basic::Exists(r) => self.edges(r).into_iter().map(|(x, _)| x).collect(),
        }
    }

    fn add_element(&mut self, e: Elem) {
        if self.elements.insert(e.clone()) {
            self.add_to_class(&Entity::top_class(), e);
        }
    }

    /// True when no negative axiom of `o` is violated. For DL-Lite this is
    /// equivalent to satisfiability of `o`.
    pub fn is_consistent(&self, o: &crate::owl::Ontology) -> bool {
        if self
            .class_ext
            .get(&Entity::bottom_class())
            .is_some_and(|s| !s.is_empty())
            || self
                .prop_ext
                .get(&Entity::bottom_property())
                .is_some_and(|s| !s.is_empty())
        {
            return false;
        }
        o.tbox.iter().all(|a| match a {
            Axiom::ClassDisjoint(x, y) => {
                self.ext(&basic_of(x)).is_disjoint(&self.ext(&basic_of(y)))
            }
            Axiom::PropDisjoint(p, q) => self.edges(p).iter().all(|(x, y)| !self.has_edge(q, x, y)),
            Axiom::Irreflexive(p) => self
                .edges(&PropExpr::Direct(p.clone()))
                .iter()
                .all(|(x, y)| x != y),
            _ => true,
        })
    }

    /// Membership and role facts over named elements only.
    pub fn named_facts(&self) -> BTreeSet<Fact> {
        let mut out = BTreeSet::new();
        for (c, set) in &self.class_ext {
            for e in set.iter().filter_map(Elem::named) {
                out.extend(mk("instc", vec![c.clone(), e.clone()]));
            }
        }
        for (p, set) in &self.prop_ext {
            for (x, y) in set {
                if let (Elem::Named(x), Elem::Named(y)) = (x, y) {
                    out.extend(mk("instr", vec![p.clone(), x.clone(), y.clone()]));
                }
            }
        }
        out
    }
}

/// Restricted chase of the positive axioms of a normalized ontology.
pub fn chase(o: &crate::owl::Ontology, max_depth: usize) -> Result<CanonicalModel, OracleError> {
    let mut m = CanonicalModel::default();
    let mut depth: HashMap<u32, usize> = HashMap::new();
    let mut next_null = 0u32;
    for a in &o.abox {
        match a {
            Axiom::ClassAssertion(c, x) => {
                m.add_element(Elem::Named(x.clone()));
                m.add_to_class(c, Elem::Named(x.clone()));
            }
            Axiom::PropAssertion(r, x, y) => {
                m.add_element(Elem::Named(x.clone()));
                m.add_element(Elem::Named(y.clone()));
                m.add_edge(
                    &PropExpr::Direct(r.clone()),
                    Elem::Named(x.clone()),
                    Elem::Named(y.clone()),
                );
            }
            Axiom::DifferentIndividuals(x, y) => {
                m.add_element(Elem::Named(x.clone()));
                m.add_element(Elem::Named(y.clone()));
            }
            _ => {}
        }
    }
    let elem_depth = |e: &Elem, depth: &HashMap<u32, usize>| match e {
        Elem::Named(_) => 0,
        Elem::Null(k) => depth[k],
    };
    loop {
        let mut changed = false;
        for a in &o.tbox {
            match a {
                Axiom::ClassInclusion(b, x) => match rhs_of(x) {
                    Rhs::Class(c) => {
                        for e in m.ext(&basic_of(b)) {
                            changed |= m.add_to_class(&c, e);
                        }
                    }
                    Rhs::Exists(r, f) => {
                        let mut witnessed: BTreeSet<Elem> = m
                            .edges(&r)
                            .into_iter()
                            .filter(|(_, t)| m.in_class(&f, t))
                            .map(|(s, _)| s)
                            .collect();
                        for e in m.ext(&basic_of(b)) {
                            if witnessed.contains(&e) {
                                continue;
                            }
                            let d = elem_depth(&e, &depth) + 1;
                            if d > max_depth || m.elements.len() >= MAX_ELEMENTS {
                                return Err(OracleError::CyclicTBox(max_depth));
                            }
                            let n = Elem::Null(next_null);
                            depth.insert(next_null, d);
                            next_null += 1;
                            m.depth = m.depth.max(d);
                            m.add_element(n.clone());
                            m.add_edge(&r, e.clone(), n.clone());
                            m.add_to_class(&f, n);
                            witnessed.insert(e);
                            changed = true;
                        }
                    }
                },
                Axiom::PropInclusion(p, q) => {
                    for (x, y) in m.edges(p) {
                        changed |= m.add_edge(q, x, y);
                    }
                }
                Axiom::Reflexive(p) => {
                    for e in m.elements.clone() {
                        changed |= m.add_edge(&PropExpr::Direct(p.clone()), e.clone(), e);
                    }
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    Ok(m)
}

/// Whether query variables may be bound to nulls (answer variables never are).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerMode {
    Full,
    NamedOnly,
}

/// Closure plus canonical model, ready to answer queries.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub closure: Closure,
    pub model: CanonicalModel,
    relations: HashMap<Pred, Vec<Vec<Elem>>>,
}

impl Oracle {
    pub fn new(o: &crate::owl::Ontology, max_depth: usize) -> Result<Self, OracleError> {
        let closure = tbox_closure(o);
        let model = chase(o, max_depth)?;
        let mut relations: HashMap<Pred, Vec<Vec<Elem>>> = HashMap::new();
        let mut put = |name: &str, row: Vec<Elem>| {
            let b = Builtin::from_name(name).expect("builtin");
            relations.entry(Pred::Builtin(b)).or_default().push(row);
        };
        for f in closure.facts() {
            put(f.pred.name(), f.args.into_iter().map(Elem::Named).collect());
        }
        for (c, set) in &model.class_ext {
            for e in set {
                put("instc", vec![Elem::Named(c.clone()), e.clone()]);
            }
        }
        for (p, set) in &model.prop_ext {
            for (x, y) in set {
                put("instr", vec![Elem::Named(p.clone()), x.clone(), y.clone()]);
            }
        }
        for a in &o.abox {
            if let Axiom::DifferentIndividuals(x, y) = a {
                put("diff", vec![Elem::Named(x.clone()), Elem::Named(y.clone())]);
            }
        }
        for e in model.elements.iter().filter(|e| e.named().is_some()) {
            put("named", vec![e.clone()]);
        }
        Ok(Oracle {
            closure,
            model,
            relations,
        })
    }

    /// Every satisfying substitution projected on the answer variables, with
    /// named elements only in the answers. Sorted and duplicate free.
    pub fn answer(&self, q: &ConjunctiveQuery, mode: AnswerMode) -> Vec<Vec<Entity>> {
        let mut out = BTreeSet::new();
        let mut binding: HashMap<&str, Elem> = HashMap::new();
        self.search(q, 0, mode, &mut binding, &mut out);
        out.into_iter().collect()
    }

    fn search<'q>(
        &self,
        q: &'q ConjunctiveQuery,
        i: usize,
        mode: AnswerMode,
        binding: &mut HashMap<&'q str, Elem>,
        out: &mut BTreeSet<Vec<Entity>>,
    ) {
        let Some(atom) = q.body.get(i) else {
            let row: Option<Vec<Entity>> = q
                .answer_vars
                .iter()
                .map(|v| binding[&**v].named().cloned())
                .collect();
            out.extend(row);
            return;
        };
        let rows = self
            .relations
            .get(&atom.pred)
            .map_or(&[][..], Vec::as_slice);
        'rows: for row in rows {
            if mode == AnswerMode::NamedOnly && row.iter().any(|e| e.named().is_none()) {
                continue;
            }
            let mut fresh: Vec<&str> = Vec::new();
            for (t, e) in atom.args.iter().zip(row) {
                let ok = match t {
                    Term::Const(c) => e.named() == Some(c),
                    Term::Var(v) => match binding.get(&**v) {
                        Some(b) => b == e,
                        None => {
                            binding.insert(v, e.clone());
                            fresh.push(v);
                            true
                        }
                    },
                };
                if !ok {
                    for v in fresh {
                        binding.remove(v);
                    }
                    continue 'rows;
                }
            }
            self.search(q, i + 1, mode, binding, out);
            for v in fresh {
                binding.remove(v);
            }
        }
    }
}

/// Certain answers of `q` over a normalized ontology.
pub fn certain_answers_oracle(
    o: &crate::owl::Ontology,
    q: &ConjunctiveQuery,
    mode: AnswerMode,
) -> Result<Vec<Vec<Entity>>, OracleError> {
    Ok(Oracle::new(o, DEFAULT_MAX_DEPTH)?.answer(q, mode))
}

/// Whether `o ⊨ lhs ⊑ rhs`, decided by chasing `o` plus a fresh instance of `lhs`.
pub fn chase_entails_inclusion(
    o: &crate::owl::Ontology,
    lhs: &ClassExpr,
    rhs: &ClassExpr,
    max_depth: usize,
) -> Result<bool, OracleError> {
    let (probe, m) = chase_with_probe(o, lhs, max_depth)?;
    Ok(match rhs_of(rhs) {
        Rhs::Class(c) => m.in_class(&c, &probe),
        Rhs::Exists(r, f) => m
            .edges(&r)
            .iter()
            .any(|(s, t)| *s == probe && m.in_class(&f, t)),
    })
}

/// Whether `o` plus a fresh instance of `lhs` is unsatisfiable.
pub fn chase_probe_inconsistent(
    o: &crate::owl::Ontology,
    probes: &[ClassExpr],
    max_depth: usize,
) -> Result<bool, OracleError> {
    let mut o2 = o.clone();
    let a = probe_entity("a");
    for (i, p) in probes.iter().enumerate() {
        add_probe(&mut o2, p, &a, i);
    }
    let m = chase(&o2, max_depth)?;
    Ok(!m.is_consistent(&o2))
}

fn probe_entity(s: &str) -> Entity {
    Entity::new(&format!("urn:metaql:probe-{s}")).expect("valid IRI")
}

fn add_probe(o: &mut crate::owl::Ontology, c: &ClassExpr, a: &Entity, i: usize) {
    match basic_of(c) {
        Basic::Class(c) => {
            o.abox.insert(Axiom::ClassAssertion(c, a.clone()));
        }
        Basic::Exists(r) => {
            let b = probe_entity(&format!("b{i}"));
            let (x, y) = match &r {
                PropExpr::Direct(_) => (a.clone(), b),
                PropExpr::Inverse(_) => (b, a.clone()),
            };
            o.abox.insert(Axiom::PropAssertion(r.prop().clone(), x, y));
        }
    }
}

fn chase_with_probe(
    o: &crate::owl::Ontology,
    lhs: &ClassExpr,
    max_depth: usize,
) -> Result<(Elem, CanonicalModel), OracleError> {
    let mut o2 = o.clone();
    let a = probe_entity("a");
    add_probe(&mut o2, lhs, &a, 0);
    Ok((Elem::Named(a), chase(&o2, max_depth)?))
}

/// Whether `o ⊨ p ⊑ q` for property expressions.
pub fn chase_entails_role_inclusion(
    o: &crate::owl::Ontology,
    p: &PropExpr,
    q: &PropExpr,
    max_depth: usize,
) -> Result<bool, OracleError> {
    let (probe, m) = chase_with_probe(o, &ClassExpr::exists(p.clone()), max_depth)?;
    let b = Elem::Named(probe_entity("b0"));
    Ok(m.has_edge(q, &probe, &b))
}

/// Whether every element of every model of `o` is `p`-reflexive.
pub fn chase_entails_reflexive(
    o: &crate::owl::Ontology,
    p: &Entity,
    max_depth: usize,
) -> Result<bool, OracleError> {
    let (probe, m) = chase_with_probe(o, &ClassExpr::Atomic(Entity::top_class()), max_depth)?;
    Ok(m.has_edge(&PropExpr::Direct(p.clone()), &probe, &probe))
}
