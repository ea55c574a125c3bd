use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::seminaive::{evaluate_fixpoint_with, EvalOptions};
use super::store::FactStore;
use super::{EngineError, EvalStats};
use crate::model::{Atom, ConjunctiveQuery, Entity, Fact, Pred, Rule, Term};

/// A demand-restricted program produced by the magic-sets rewriting.
#[derive(Debug, Clone)]
pub struct MagicProgram {
    pub rules: Vec<Rule>,
    pub seed: Fact,
    /// Predicate holding the query answers after evaluation.
    pub answer_pred: Pred,
}

const QUERY: &str = "query";

fn adorned(p: &Pred, ad: &str) -> Pred {
    Pred::aux(&format!("{}@{ad}", p.name()), p.arity())
}

fn magic(p: &Pred, ad: &str) -> Pred {
    let n = ad.bytes().filter(|&b| b == b'b').count();
    Pred::aux(&format!("magic@{}@{ad}", p.name()), n)
}

fn bound_args(args: &[Term], ad: &str) -> Vec<Term> {
    args.iter()
        .zip(ad.bytes())
        .filter(|(_, b)| *b == b'b')
        .map(|(t, _)| t.clone())
        .collect()
}

fn is_bound(t: &Term, bound: &HashSet<Arc<str>>) -> bool {
    match t {
        Term::Const(_) => true,
        Term::Var(v) => bound.contains(v),
    }
}

/// Rewrites `program` so that evaluation only derives facts relevant to `q`.
///
/// Sideways information passing is greedy: the next body atom is the one with
/// the most bound arguments.
pub fn magic_transform(program: &[Rule], q: &ConjunctiveQuery) -> MagicProgram {
    let qpred = Pred::aux(QUERY, q.answer_vars.len());
    let qrule = Rule {
        head: Atom {
            pred: qpred.clone(),
            args: q.answer_vars.iter().map(|v| Term::Var(v.clone())).collect(),
        },
        body: q.body.clone(),
    };
    let mut by_head: HashMap<&Pred, Vec<&Rule>> = HashMap::new();
    for r in program {
        by_head.entry(&r.head.pred).or_default().push(r);
    }
    by_head.entry(&qpred).or_default().push(&qrule);
    let idb: HashSet<&Pred> = by_head.keys().copied().collect();

    let top_ad = "f".repeat(qpred.arity());
    let mut rules = Vec::new();
    let mut seen: BTreeSet<(Pred, String)> = BTreeSet::new();
    let mut work = VecDeque::from([(qpred.clone(), top_ad.clone())]);
    seen.insert((qpred.clone(), top_ad.clone()));

    while let Some((p, ad)) = work.pop_front() {
        if matches!(p, Pred::Builtin(_)) {
            let vars: Vec<Term> = (0..p.arity())
                .map(|i| Term::var(&format!("V{i}")))
                .collect();
            rules.push(Rule {
                head: Atom {
                    pred: adorned(&p, &ad),
                    args: vars.clone(),
                },
                body: vec![
                    Atom {
                        pred: magic(&p, &ad),
                        args: bound_args(&vars, &ad),
                    },
                    Atom {
                        pred: p.clone(),
                        args: vars,
                    },
                ],
            });
        }
        for r in by_head.get(&p).into_iter().flatten() {
            let mut bound: HashSet<Arc<str>> = r
                .head
                .args
                .iter()
                .zip(ad.bytes())
                .filter_map(|(t, b)| match t {
                    Term::Var(v) if b == b'b' => Some(v.clone()),
                    _ => None,
                })
                .collect();
            let mut body = vec![Atom {
                pred: magic(&p, &ad),
                args: bound_args(&r.head.args, &ad),
            }];
            let mut left: Vec<usize> = (0..r.body.len()).collect();
            while !left.is_empty() {
                let (k, _) = left
                    .iter()
                    .enumerate()
                    .max_by_key(|(_, &i)| {
                        let n = r.body[i]
                            .args
                            .iter()
                            .filter(|t| is_bound(t, &bound))
                            .count();
                        (n, std::cmp::Reverse(i))
                    })
                    .expect("nonempty");
                let atom = &r.body[left.remove(k)];
                if idb.contains(&atom.pred) {
                    let sub_ad: String = atom
                        .args
                        .iter()
                        .map(|t| if is_bound(t, &bound) { 'b' } else { 'f' })
                        .collect();
                    rules.push(Rule {
                        head: Atom {
                            pred: magic(&atom.pred, &sub_ad),
                            args: bound_args(&atom.args, &sub_ad),
                        },
                        body: body.clone(),
                    });
                    body.push(Atom {
                        pred: adorned(&atom.pred, &sub_ad),
                        args: atom.args.clone(),
                    });
                    if seen.insert((atom.pred.clone(), sub_ad.clone())) {
                        work.push_back((atom.pred.clone(), sub_ad));
                    }
                } else {
                    body.push(atom.clone());
                }
                bound.extend(atom.vars().map(Arc::from));
            }
            rules.push(Rule {
                head: Atom {
                    pred: adorned(&p, &ad),
                    args: r.head.args.clone(),
                },
                body,
            });
        }
    }
    MagicProgram {
        rules,
        seed: Fact {
            pred: magic(&qpred, &top_ad),
            args: Vec::new(),
        },
        answer_pred: adorned(&qpred, &top_ad),
    }
}

/// Answers `q` by evaluating only the demanded part of the program over `base`.
pub fn answer_with_demand(
    base: &FactStore,
    program: &[Rule],
    q: &ConjunctiveQuery,
    opts: &EvalOptions,
) -> Result<(Vec<Vec<Entity>>, EvalStats), EngineError> {
    for a in &q.body {
        if let Pred::Aux { name, .. } = &a.pred {
            if base.lookup_pred(&a.pred).is_none() && !program.iter().any(|r| r.head.pred == a.pred)
            {
                return Err(EngineError::UnknownPredicate(name.to_string()));
            }
        }
    }
    for v in &q.answer_vars {
        if !q.body.iter().any(|a| a.vars().any(|w| w == &**v)) {
            return Err(EngineError::UnsafeQuery(v.to_string()));
        }
    }
    let mp = magic_transform(program, q);
    let mut store = base.clone();
    store.assert_facts([&mp.seed])?;
    let (store, stats) = evaluate_fixpoint_with(store, &mp.rules, opts);
    let mut out: Vec<Vec<Entity>> = store
        .facts_of(&mp.answer_pred)
        .into_iter()
        .map(|f| f.args)
        .collect();
    out.sort();
    out.dedup();
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{answer_conjunctive_query, evaluate_fixpoint};
    use crate::model::Builtin;
    use crate::rules::builtin_rules;

    fn e(s: &str) -> Entity {
        Entity::new(&format!("http://ex/{s}")).unwrap()
    }

    #[test]
    fn transformed_rules_are_safe() {
        let rules: Vec<Rule> = builtin_rules().iter().map(|(r, _)| r.clone()).collect();
        let q = ConjunctiveQuery::new(
            vec![Arc::from("X")],
            vec![Atom::new(Builtin::Instc, vec![Term::Const(e("A")), Term::var("X")]).unwrap()],
        )
        .unwrap();
        let mp = magic_transform(&rules, &q);
        for r in &mp.rules {
            Rule::new(r.head.clone(), r.body.clone()).unwrap();
        }
        assert!(mp.rules.iter().any(|r| r.head.pred.name() == "instc@bf"));
    }

    #[test]
    fn demand_matches_full_materialization() {
        let rules: Vec<Rule> = builtin_rules().iter().map(|(r, _)| r.clone()).collect();
        let facts = vec![
            Fact::new(Builtin::Instc, vec![e("A"), e("x")]).unwrap(),
            Fact::new(Builtin::IsacCC, vec![e("A"), e("B")]).unwrap(),
            Fact::new(Builtin::IsacCC, vec![e("B"), e("C")]).unwrap(),
            Fact::new(Builtin::Instc, vec![e("D"), e("y")]).unwrap(),
        ];
        let base = FactStore::from_facts(&facts).unwrap();
        let q = ConjunctiveQuery::new(
            vec![Arc::from("X")],
            vec![Atom::new(Builtin::Instc, vec![Term::Const(e("C")), Term::var("X")]).unwrap()],
        )
        .unwrap();
        let (full, _) = evaluate_fixpoint(base.clone(), &rules);
        let expect = answer_conjunctive_query(&full, &q).unwrap();
        let (got, _) = answer_with_demand(&base, &rules, &q, &EvalOptions::default()).unwrap();
        assert_eq!(got, expect);
        assert_eq!(got, vec![vec![e("x")]]);
    }
}
