use std::collections::HashSet;

use super::join::{execute, plan, Arg, CAtom, Range, VarMap};
use super::store::{FactStore, Sym};
use super::EngineError;
use crate::model::{ConjunctiveQuery, Entity, Pred, Term};

/// Distinct answer tuples of `q` over `store`, sorted by IRI.
pub fn answer_conjunctive_query(
    store: &FactStore,
    q: &ConjunctiveQuery,
) -> Result<Vec<Vec<Entity>>, EngineError> {
    for a in &q.body {
        if a.args.len() != a.pred.arity() {
            return Err(EngineError::ArityMismatch {
                pred: a.pred.name().to_string(),
                expected: a.pred.arity(),
                got: a.args.len(),
            });
        }
        if matches!(a.pred, Pred::Aux { .. }) && store.lookup_pred(&a.pred).is_none() {
            return Err(EngineError::UnknownPredicate(a.pred.name().to_string()));
        }
    }
    for v in &q.answer_vars {
        if !q.body.iter().any(|a| a.vars().any(|w| w == &**v)) {
            return Err(EngineError::UnsafeQuery(v.to_string()));
        }
    }
    let known = q.body.iter().all(|a| {
        store.lookup_pred(&a.pred).is_some()
            && a.args.iter().all(|t| match t {
                Term::Const(e) => store.symbols.get(e).is_some(),
                Term::Var(_) => true,
            })
    });
    if !known {
        return Ok(Vec::new());
    }

    let mut vars = VarMap::default();
    let atoms: Vec<CAtom> = q
        .body
        .iter()
        .map(|a| compile_known(store, &mut vars, a))
        .collect();
    let answer: Vec<usize> = q
        .answer_vars
        .iter()
        .map(|v| vars.get(v).expect("checked above"))
        .collect();
    let ranges = vec![Range::Full; atoms.len()];
    let first = (0..atoms.len()).min_by_key(|&i| (estimate(store, &atoms[i]), i));
    let steps = plan(store, &atoms, &ranges, first, vars.len());
    let mut seen: HashSet<Vec<Sym>> = HashSet::new();
    execute(store, &steps, vars.len(), &mut |b| {
        seen.insert(answer.iter().map(|&v| b[v]).collect());
    });
    let mut out: Vec<Vec<Entity>> = seen
        .into_iter()
        .map(|t| {
            t.into_iter()
                .map(|s| store.symbols.resolve(s).clone())
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

fn compile_known(store: &FactStore, vars: &mut VarMap, a: &crate::model::Atom) -> CAtom {
    let pred = store.lookup_pred(&a.pred).expect("known predicate");
    let args = a
        .args
        .iter()
        .map(|t| match t {
            Term::Const(e) => Arg::Const(store.symbols.get(e).expect("known constant")),
            Term::Var(v) => Arg::Var(vars.id(v)),
        })
        .collect();
    CAtom { pred, args }
}

/// Exact match count for the atom's constants, or the relation size.
fn estimate(store: &FactStore, a: &CAtom) -> usize {
    let rel = &store.relations[a.pred];
    let mut mask = 0u32;
    let mut key = Vec::new();
    for (c, arg) in a.args.iter().enumerate() {
        if let Arg::Const(s) = arg {
            mask |= 1 << c;
            key.push(*s);
        }
    }
    if mask == 0 {
        rel.len()
    } else {
        rel.index(mask).get(&key).len()
    }
}
