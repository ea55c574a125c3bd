use indexmap::IndexSet;
use rayon::prelude::*;
use web_time::Instant;

use super::join::{compile_rule, execute, instantiate, plan, CRule, Range};
use super::store::{FactStore, PredId, Tuple};
use super::EvalStats;
use crate::model::Rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Worker threads; 0 lets rayon decide, 1 runs inline.
    pub threads: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { threads: 1 }
    }
}

/// Computes the minimal model of the store's facts under `rules`.
pub fn evaluate_fixpoint(store: FactStore, rules: &[Rule]) -> (FactStore, EvalStats) {
    evaluate_fixpoint_with(store, rules, &EvalOptions::default())
}

pub fn evaluate_fixpoint_with(
    mut store: FactStore,
    rules: &[Rule],
    opts: &EvalOptions,
) -> (FactStore, EvalStats) {
    let start = Instant::now();
    let mut stats = EvalStats::default();
    let compiled: Vec<CRule> = rules.iter().map(|r| compile_rule(&mut store, r)).collect();

    for r in compiled.iter().filter(|r| r.body.is_empty()) {
        let t = instantiate(&r.head, &[]);
        if store.insert_tuple(r.head.pred, t) {
            let name = store.pred(r.head.pred).name().to_string();
            *stats.facts_derived.entry(name).or_default() += 1;
        }
    }
    for rel in &mut store.relations {
        rel.delta_start = 0;
    }

    let pool = (opts.threads != 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool")
    });

    loop {
        stats.rounds += 1;
        let tasks: Vec<(usize, usize)> = compiled
            .iter()
            .enumerate()
            .flat_map(|(ri, r)| (0..r.body.len()).map(move |d| (ri, d)))
            .filter(|&(ri, d)| {
                let body = &compiled[ri].body;
                store.relations[body[d].pred].delta_len() > 0
                    && body[..d]
                        .iter()
                        .all(|a| store.relations[a.pred].delta_start > 0)
            })
            .collect();

        let run_task = |&(ri, d): &(usize, usize)| -> (PredId, IndexSet<Tuple>) {
            derive(&store, &compiled[ri], d)
        };
        let results: Vec<(PredId, IndexSet<Tuple>)> = match &pool {
            Some(p) => p.install(|| tasks.par_iter().map(run_task).collect()),
            None => tasks.iter().map(run_task).collect(),
        };

        for rel in &mut store.relations {
            rel.delta_start = rel.len();
        }
        let mut new = 0;
        for (pred, tuples) in results {
            let mut added = 0;
            for t in tuples {
                if store.insert_tuple(pred, t) {
                    added += 1;
                }
            }
            if added > 0 {
                let name = store.pred(pred).name().to_string();
                *stats.facts_derived.entry(name).or_default() += added;
                new += added;
            }
        }
        stats.per_round.push(new);
        if new == 0 {
            break;
        }
        store.bump_generation();
    }
    debug_assert!(store.verify_indexes());
    stats.wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    (store, stats)
}

/// One semi-naive variant: atom `d` over the delta, earlier atoms over the
/// old facts, later atoms over everything.
fn derive(store: &FactStore, rule: &CRule, d: usize) -> (PredId, IndexSet<Tuple>) {
    let ranges: Vec<Range> = (0..rule.body.len())
        .map(|j| match j.cmp(&d) {
            std::cmp::Ordering::Less => Range::Old,
            std::cmp::Ordering::Equal => Range::Delta,
            std::cmp::Ordering::Greater => Range::Full,
        })
        .collect();
    let steps = plan(store, &rule.body, &ranges, Some(d), rule.nvars);
    let head_rel = &store.relations[rule.head.pred];
    let mut out = IndexSet::new();
    execute(store, &steps, rule.nvars, &mut |binds| {
        let t = instantiate(&rule.head, binds);
        if !head_rel.contains(&t) {
            out.insert(t);
        }
    });
    (rule.head.pred, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Builtin, Entity, Fact, Pred, Term};
    use crate::rules::builtin_rules;

    fn e(s: &str) -> Entity {
        Entity::new(&format!("http://ex/{s}")).unwrap()
    }

    fn fact(b: Builtin, args: &[&str]) -> Fact {
        Fact::new(b, args.iter().map(|a| e(a)).collect()).unwrap()
    }

    fn catalogue() -> Vec<Rule> {
        builtin_rules().iter().map(|(r, _)| r.clone()).collect()
    }

    #[test]
    fn example_one_inherits_memberships() {
        let facts = [
            fact(Builtin::Instc, &["GoldenEagle", "Harry"]),
            fact(Builtin::IsacCC, &["GoldenEagle", "Eagle"]),
            fact(Builtin::IsacCC, &["Eagle", "Birds"]),
        ];
        let store = FactStore::from_facts(&facts).unwrap();
        let (m, _) = evaluate_fixpoint(store, &catalogue());
        assert!(m.contains(&fact(Builtin::Instc, &["Eagle", "Harry"])));
        assert!(m.contains(&fact(Builtin::Instc, &["Birds", "Harry"])));
    }

    #[test]
    fn empty_input_takes_one_round() {
        let (m, stats) = evaluate_fixpoint(FactStore::new(), &catalogue());
        assert!(m.is_empty());
        assert_eq!(stats.rounds, 1);
        assert_eq!(stats.per_round, vec![0]);
    }

    #[test]
    fn body_free_rules_are_facts() {
        let r = Rule::new(
            Atom::new(Pred::aux("p", 1), vec![Term::Const(e("a"))]).unwrap(),
            vec![],
        )
        .unwrap();
        let (m, stats) = evaluate_fixpoint(FactStore::new(), &[r]);
        assert_eq!(m.len(), 1);
        assert_eq!(stats.facts_derived["p"], 1);
    }

    #[test]
    fn thread_count_does_not_change_the_dump() {
        let mut facts = Vec::new();
        for i in 0..30 {
            facts.push(fact(
                Builtin::IsacCC,
                &[&format!("c{i}"), &format!("c{}", i + 1)],
            ));
            facts.push(fact(Builtin::Instc, &[&format!("c{i}"), &format!("x{i}")]));
        }
        let store = FactStore::from_facts(&facts).unwrap();
        let (a, sa) =
            evaluate_fixpoint_with(store.clone(), &catalogue(), &EvalOptions { threads: 1 });
        let (b, sb) = evaluate_fixpoint_with(store, &catalogue(), &EvalOptions { threads: 4 });
        assert_eq!(a.to_dl(), b.to_dl());
        assert_eq!(sa.per_round, sb.per_round);
        assert_eq!(sa.facts_derived, sb.facts_derived);
    }
}
