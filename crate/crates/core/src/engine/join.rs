use std::collections::HashMap;
use std::sync::Arc;

use super::store::{ColumnIndex, FactStore, PredId, Sym};
use crate::model::{Atom, Rule, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Arg {
    Const(Sym),
    Var(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct CAtom {
    pub pred: PredId,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone)]
pub(crate) struct CRule {
    pub head: CAtom,
    pub body: Vec<CAtom>,
    pub nvars: usize,
}

/// Variable numbering shared by the atoms of one rule or query.
#[derive(Default)]
pub(crate) struct VarMap {
    ids: HashMap<Arc<str>, usize>,
}

impl VarMap {
    pub fn id(&mut self, v: &Arc<str>) -> usize {
        let n = self.ids.len();
        *self.ids.entry(v.clone()).or_insert(n)
    }

    pub fn get(&self, v: &str) -> Option<usize> {
        self.ids.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}

/// Compiles an atom, interning predicates and constants into the store.
pub(crate) fn compile_atom(store: &mut FactStore, vars: &mut VarMap, a: &Atom) -> CAtom {
    let pred = store.pred_id(&a.pred);
    let args = a
        .args
        .iter()
        .map(|t| match t {
            Term::Const(e) => Arg::Const(store.symbols.intern(e)),
            Term::Var(v) => Arg::Var(vars.id(v)),
        })
        .collect();
    CAtom { pred, args }
}

pub(crate) fn compile_rule(store: &mut FactStore, r: &Rule) -> CRule {
    let mut vars = VarMap::default();
    let body: Vec<CAtom> = r
        .body
        .iter()
        .map(|a| compile_atom(store, &mut vars, a))
        .collect();
    let head = compile_atom(store, &mut vars, &r.head);
    CRule {
        head,
        body,
        nvars: vars.len(),
    }
}

/// Which slice of a relation an atom ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Range {
    Full,
    Old,
    Delta,
}

#[derive(Debug, Clone, Copy)]
enum ColOp {
    Bind(usize),
    Check(usize),
}

#[derive(Debug)]
pub(crate) struct Step {
    pred: PredId,
    lo: usize,
    hi: usize,
    mask: u32,
    key: Vec<Arg>,
    ops: Vec<(usize, ColOp)>,
    index: Option<Arc<ColumnIndex>>,
}

/// Greedy join order: `first` (if any), then the atom with the most bound
/// arguments, ties broken by smaller relation and then position.
pub(crate) fn plan(
    store: &FactStore,
    atoms: &[CAtom],
    ranges: &[Range],
    first: Option<usize>,
    nvars: usize,
) -> Vec<Step> {
    let mut bound = vec![false; nvars];
    let mut done = vec![false; atoms.len()];
    let mut steps = Vec::with_capacity(atoms.len());
    let bound_count = |a: &CAtom, bound: &[bool]| {
        a.args
            .iter()
            .filter(|x| match x {
                Arg::Const(_) => true,
                Arg::Var(v) => bound[*v],
            })
            .count()
    };
    for n in 0..atoms.len() {
        let pick = match first {
            Some(f) if n == 0 => f,
            _ => (0..atoms.len())
                .filter(|&i| !done[i])
                .min_by_key(|&i| {
                    let size = store.relations[atoms[i].pred].len();
                    (std::cmp::Reverse(bound_count(&atoms[i], &bound)), size, i)
                })
                .expect("remaining atom"),
        };
        done[pick] = true;
        let atom = &atoms[pick];
        let rel = &store.relations[atom.pred];
        let (lo, hi) = match ranges[pick] {
            Range::Full => (0, rel.len()),
            Range::Old => (0, rel.delta_start),
            Range::Delta => (rel.delta_start, rel.len()),
        };
        let mut mask = 0u32;
        let mut key = Vec::new();
        let mut ops = Vec::new();
        for (c, arg) in atom.args.iter().enumerate() {
            match *arg {
                Arg::Const(_) => {
                    mask |= 1 << c;
                    key.push(*arg);
                }
                Arg::Var(v) if bound[v] => {
                    if ops
                        .iter()
                        .any(|(_, op)| matches!(op, ColOp::Bind(w) if *w == v))
                    {
                        ops.push((c, ColOp::Check(v)));
                    } else {
                        mask |= 1 << c;
                        key.push(*arg);
                    }
                }
                Arg::Var(v) => {
                    bound[v] = true;
                    ops.push((c, ColOp::Bind(v)));
                }
            }
        }
        let index = (mask != 0 && hi > lo).then(|| rel.index(mask));
        steps.push(Step {
            pred: atom.pred,
            lo,
            hi,
            mask,
            key,
            ops,
            index,
        });
    }
    steps
}

/// Enumerates every binding satisfying the planned steps.
pub(crate) fn execute(
    store: &FactStore,
    steps: &[Step],
    nvars: usize,
    emit: &mut dyn FnMut(&[Sym]),
) {
    if steps.iter().any(|s| s.hi <= s.lo) {
        return;
    }
    let mut binds = vec![0 as Sym; nvars];
    let mut key = Vec::new();
    run(store, steps, 0, &mut binds, &mut key, emit);
}

fn run(
    store: &FactStore,
    steps: &[Step],
    i: usize,
    binds: &mut [Sym],
    key: &mut Vec<Sym>,
    emit: &mut dyn FnMut(&[Sym]),
) {
    let Some(step) = steps.get(i) else {
        emit(binds);
        return;
    };
    let rel = &store.relations[step.pred];
    let mut visit = |row: &[Sym], binds: &mut [Sym], key: &mut Vec<Sym>| {
        for &(c, op) in &step.ops {
            match op {
                ColOp::Bind(v) => binds[v] = row[c],
                ColOp::Check(v) => {
                    if binds[v] != row[c] {
                        return;
                    }
                }
            }
        }
        run(store, steps, i + 1, binds, key, emit);
    };
    if step.mask == 0 {
        for r in step.lo..step.hi {
            visit(rel.row(r), binds, key);
        }
        return;
    }
    key.clear();
    key.extend(step.key.iter().map(|a| match *a {
        Arg::Const(s) => s,
        Arg::Var(v) => binds[v],
    }));
    let index = step.index.as_ref().expect("index for bound columns");
    let ids = index.get(key);
    let start = ids.partition_point(|&r| (r as usize) < step.lo);
    let end = ids.partition_point(|&r| (r as usize) < step.hi);
    for &r in &ids[start..end] {
        visit(rel.row(r as usize), binds, key);
    }
}

pub(crate) fn instantiate(a: &CAtom, binds: &[Sym]) -> Box<[Sym]> {
    a.args
        .iter()
        .map(|x| match *x {
            Arg::Const(s) => s,
            Arg::Var(v) => binds[v],
        })
        .collect()
}
