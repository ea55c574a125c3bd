use std::collections::{HashMap, HashSet};

use super::store::FactStore;
use crate::model::{Atom, Entity, Fact, Pred, Rule, Term};

type Subst = HashMap<String, Entity>;

/// Reference evaluator: re-applies every rule to every fact until nothing
/// changes. Slow, but shares no code with the semi-naive engine.
pub fn naive_evaluate(store: &FactStore, rules: &[Rule]) -> FactStore {
    let mut facts: HashSet<Fact> = store.facts().into_iter().collect();
    loop {
        let mut by_pred: HashMap<&Pred, Vec<&[Entity]>> = HashMap::new();
        for f in &facts {
            by_pred.entry(&f.pred).or_default().push(&f.args);
        }
        let mut fresh = Vec::new();
        for r in rules {
            let mut subs = vec![Subst::new()];
            for atom in &r.body {
                let rows = by_pred.get(&atom.pred).map_or(&[][..], Vec::as_slice);
                subs = subs
                    .iter()
                    .flat_map(|s| rows.iter().filter_map(move |row| extend(s, atom, row)))
                    .collect();
            }
            for s in subs {
                let args = r
                    .head
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Const(e) => e.clone(),
                        Term::Var(v) => s[&**v].clone(),
                    })
                    .collect();
                let f = Fact {
                    pred: r.head.pred.clone(),
                    args,
                };
                if !facts.contains(&f) {
                    fresh.push(f);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        facts.extend(fresh);
    }
    let mut sorted: Vec<Fact> = facts.into_iter().collect();
    sorted.sort();
    FactStore::from_facts(&sorted).expect("facts already checked")
}

fn extend(s: &Subst, atom: &Atom, row: &[Entity]) -> Option<Subst> {
    let mut out = s.clone();
    for (t, v) in atom.args.iter().zip(row) {
        match t {
            Term::Const(c) if c != v => return None,
            Term::Const(_) => {}
            Term::Var(name) => match out.get(&**name) {
                Some(prev) if prev != v => return None,
                Some(_) => {}
                None => {
                    out.insert(name.to_string(), v.clone());
                }
            },
        }
    }
    Some(out)
}
