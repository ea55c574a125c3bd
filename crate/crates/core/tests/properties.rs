use std::collections::BTreeSet;
use std::sync::Arc;

use metaql::engine::{
    answer_conjunctive_query, answer_with_demand, evaluate_fixpoint, evaluate_fixpoint_with,
    naive_evaluate, EvalOptions, FactStore,
};
use metaql::model::{Atom, ConjunctiveQuery, Entity, Fact, Pred, Rule, Term};
use metaql::owl::{normalize_ontology, parse_ontology};
use metaql::random::{random_ontology, random_program, random_query, RandomConfig};
use metaql::rules::builtin_rules;
use metaql::translate::{tau, translate_ontology, untau};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn catalogue() -> Vec<Rule> {
    builtin_rules().iter().map(|(r, _)| r.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seminaive_matches_naive(seed in any::<u64>()) {
        let (facts, rules) = random_program(&mut rng(seed));
        let base = FactStore::from_facts(&facts).unwrap();
        let (semi, _) = evaluate_fixpoint(base.clone(), &rules);
        let naive = naive_evaluate(&base, &rules);
        prop_assert_eq!(semi.facts(), naive.facts());
    }

    #[test]
    fn thread_count_does_not_change_the_model(seed in any::<u64>()) {
        let o = normalize_ontology(&random_ontology(&mut rng(seed), &RandomConfig::default()));
        let base = FactStore::from_facts(&translate_ontology(&o).unwrap().facts()).unwrap();
        let (one, s1) = evaluate_fixpoint_with(base.clone(), &catalogue(), &EvalOptions { threads: 1 });
        let (three, s3) = evaluate_fixpoint_with(base, &catalogue(), &EvalOptions { threads: 3 });
        prop_assert_eq!(one.to_dl(), three.to_dl());
        prop_assert_eq!(s1.per_round, s3.per_round);
    }

    #[test]
    fn tau_round_trips_and_is_injective(seed in any::<u64>()) {
        let o = normalize_ontology(&random_ontology(&mut rng(seed), &RandomConfig::default()));
        let mut seen = BTreeSet::new();
        for ax in o.axioms() {
            let f = tau(ax).unwrap();
            prop_assert_eq!(&untau(&f).unwrap(), ax);
            prop_assert!(seen.insert(f), "two axioms share a fact");
        }
    }

    #[test]
    fn functional_syntax_round_trips(seed in any::<u64>()) {
        let o = random_ontology(&mut rng(seed), &RandomConfig::default());
        let back = parse_ontology(&o.to_functional()).unwrap();
        prop_assert_eq!(back.tbox, o.tbox);
        prop_assert_eq!(back.abox, o.abox);
    }

    #[test]
    fn saturation_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = RandomConfig::default();
        let small = normalize_ontology(&random_ontology(&mut r, &cfg));
        let mut big = small.clone();
        big.merge(&random_ontology(&mut r, &cfg));
        let big = normalize_ontology(&big);
        let model = |o| {
            let base = FactStore::from_facts(&translate_ontology(o).unwrap().facts()).unwrap();
            evaluate_fixpoint(base, &catalogue()).0.facts().into_iter().collect::<BTreeSet<_>>()
        };
        let (m1, m2) = (model(&small), model(&big));
        prop_assert!(m1.is_subset(&m2));
    }

    #[test]
    fn demand_answers_match_full_saturation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = RandomConfig::default();
        let o = normalize_ontology(&random_ontology(&mut r, &cfg));
        let base = FactStore::from_facts(&translate_ontology(&o).unwrap().facts()).unwrap();
        let (full, _) = evaluate_fixpoint(base.clone(), &catalogue());
        for _ in 0..3 {
            let q = random_query(&mut r, &cfg, 3);
            let expect = answer_conjunctive_query(&full, &q).unwrap();
            let (got, _) = answer_with_demand(&base, &catalogue(), &q, &EvalOptions::default()).unwrap();
            prop_assert_eq!(got, expect, "{}", q);
        }
    }

    #[test]
    fn store_size_is_the_distinct_count(seed in any::<u64>()) {
        let (facts, _) = random_program(&mut rng(seed));
        let doubled: Vec<Fact> = facts.iter().chain(&facts).cloned().collect();
        let store = FactStore::from_facts(&doubled).unwrap();
        let distinct: BTreeSet<&Fact> = facts.iter().collect();
        prop_assert_eq!(store.len(), distinct.len());
    }
}

fn node(i: usize) -> Entity {
    Entity::new(&format!("http://example.org/n{i}")).unwrap()
}

#[test]
fn transitive_closure_of_a_fifty_chain() {
    let edge = Pred::aux("edge", 2);
    let path = Pred::aux("path", 2);
    let facts: Vec<Fact> = (0..49)
        .map(|i| Fact::new(edge.clone(), vec![node(i), node(i + 1)]).unwrap())
        .collect();
    let a = |p: &Pred, x: &str, y: &str| {
        Atom::new(p.clone(), vec![Term::var(x), Term::var(y)]).unwrap()
    };
    let rules = vec![
        Rule::new(a(&path, "X", "Y"), vec![a(&edge, "X", "Y")]).unwrap(),
        Rule::new(
            a(&path, "X", "Z"),
            vec![a(&path, "X", "Y"), a(&edge, "Y", "Z")],
        )
        .unwrap(),
    ];
    let base = FactStore::from_facts(&facts).unwrap();
    let (semi, stats) = evaluate_fixpoint(base.clone(), &rules);
    let naive = naive_evaluate(&base, &rules);
    assert_eq!(semi.facts_of(&path).len(), 50 * 49 / 2);
    assert_eq!(semi.facts(), naive.facts());
    assert_eq!(stats.per_round.last(), Some(&0));
}

#[test]
fn three_atom_query_matches_brute_force() {
    let mut r = rng(42);
    let preds = [Pred::aux("a", 2), Pred::aux("b", 2), Pred::aux("c", 1)];
    let facts: Vec<Fact> = (0..100)
        .map(|_| {
            let p = preds[r.random_range(0..3)].clone();
            let args = (0..p.arity()).map(|_| node(r.random_range(0..8))).collect();
            Fact::new(p, args).unwrap()
        })
        .collect();
    let store = FactStore::from_facts(&facts).unwrap();
    let v = Term::var;
    let q = ConjunctiveQuery::new(
        vec![Arc::from("X"), Arc::from("Z")],
        vec![
            Atom::new(preds[0].clone(), vec![v("X"), v("Y")]).unwrap(),
            Atom::new(preds[1].clone(), vec![v("Y"), v("Z")]).unwrap(),
            Atom::new(preds[2].clone(), vec![v("Z")]).unwrap(),
        ],
    )
    .unwrap();
    let got = answer_conjunctive_query(&store, &q).unwrap();

    let set: BTreeSet<&Fact> = facts.iter().collect();
    let has = |p: &Pred, args: Vec<Entity>| set.contains(&Fact::new(p.clone(), args).unwrap());
    let mut expect = BTreeSet::new();
    for x in 0..8 {
        for y in 0..8 {
            for z in 0..8 {
                if has(&preds[0], vec![node(x), node(y)])
                    && has(&preds[1], vec![node(y), node(z)])
                    && has(&preds[2], vec![node(z)])
                {
                    expect.insert(vec![node(x), node(z)]);
                }
            }
        }
    }
    assert_eq!(got, expect.into_iter().collect::<Vec<_>>());
}

#[test]
fn university_scale_store_holds_each_fact_once() {
    let o = normalize_ontology(&metaql::lubm::generate(&metaql::lubm::LubmConfig::default()));
    let facts = translate_ontology(&o).unwrap().facts();
    assert!(facts.len() >= 10_334);
    let text = metaql::translate::facts_to_dl(&facts);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.sort_unstable();
    lines.dedup();
    let store = FactStore::from_facts(&facts).unwrap();
    assert_eq!(store.len(), lines.len());
}
