use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use indexmap::IndexSet;

use super::EngineError;
use crate::model::{Entity, Fact, Pred};
use crate::translate::facts_to_dl;

/// Dense id of an interned constant.
pub type Sym = u32;
/// Dense id of a predicate within one store.
pub type PredId = usize;
pub type Tuple = Box<[Sym]>;

/// Bidirectional map between entities and dense symbol ids.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    ids: HashMap<Entity, Sym>,
    names: Vec<Entity>,
}

impl SymbolTable {
    pub fn intern(&mut self, e: &Entity) -> Sym {
        if let Some(&id) = self.ids.get(e) {
            return id;
        }
        let id = self.names.len() as Sym;
        self.names.push(e.clone());
        self.ids.insert(e.clone(), id);
        id
    }

    pub fn get(&self, e: &Entity) -> Option<Sym> {
        self.ids.get(e).copied()
    }

    pub fn resolve(&self, id: Sym) -> &Entity {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Hash index from the values of a column subset to ascending row ids.
#[derive(Debug, Clone, Default)]
pub(crate) struct ColumnIndex {
    cols: Vec<usize>,
    pub(crate) map: HashMap<Tuple, Vec<u32>>,
    built_upto: usize,
}

impl ColumnIndex {
    fn extend(&mut self, rows: &IndexSet<Tuple>) {
        for i in self.built_upto..rows.len() {
            let row = &rows[i];
            let key: Tuple = self.cols.iter().map(|&c| row[c]).collect();
            self.map.entry(key).or_default().push(i as u32);
        }
        self.built_upto = rows.len();
    }

    pub(crate) fn get(&self, key: &[Sym]) -> &[u32] {
        self.map.get(key).map_or(&[], Vec::as_slice)
    }
}

/// One predicate's tuples, in insertion order, with lazily built indexes.
///
/// Rows `[delta_start, len)` are the facts added by the most recent merge.
#[derive(Debug)]
pub struct Relation {
    arity: usize,
    pub(crate) rows: IndexSet<Tuple>,
    pub(crate) delta_start: usize,
    indexes: RwLock<HashMap<u32, Arc<ColumnIndex>>>,
}

impl Clone for Relation {
    fn clone(&self) -> Self {
        Relation {
            arity: self.arity,
            rows: self.rows.clone(),
            delta_start: self.delta_start,
            indexes: RwLock::default(),
        }
    }
}

impl Relation {
    fn new(arity: usize) -> Self {
        Relation {
            arity,
            rows: IndexSet::new(),
            delta_start: 0,
            indexes: RwLock::default(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, t: &[Sym]) -> bool {
        self.rows.contains(t)
    }

    pub fn delta_len(&self) -> usize {
        self.rows.len() - self.delta_start
    }

    pub(crate) fn row(&self, i: usize) -> &[Sym] {
        &self.rows[i]
    }

    /// Up-to-date index on the columns in `mask`, built or extended on demand.
    pub(crate) fn index(&self, mask: u32) -> Arc<ColumnIndex> {
        if let Some(ix) = self.indexes.read().expect("index lock").get(&mask) {
            if ix.built_upto == self.rows.len() {
                return Arc::clone(ix);
            }
        }
        let mut guard = self.indexes.write().expect("index lock");
        let ix = guard.entry(mask).or_insert_with(|| {
            Arc::new(ColumnIndex {
                cols: (0..self.arity).filter(|c| mask & (1 << c) != 0).collect(),
                ..ColumnIndex::default()
            })
        });
        if ix.built_upto < self.rows.len() {
            Arc::make_mut(ix).extend(&self.rows);
        }
        Arc::clone(ix)
    }

    /// Full rescan of every index against the rows.
    pub fn verify_indexes(&self) -> bool {
        let guard = self.indexes.read().expect("index lock");
        guard.values().all(|ix| {
            let upto = ix.built_upto.min(self.rows.len());
            let mut expect: HashMap<Tuple, Vec<u32>> = HashMap::new();
            for i in 0..upto {
                let key: Tuple = ix.cols.iter().map(|&c| self.rows[i][c]).collect();
                expect.entry(key).or_default().push(i as u32);
            }
            expect == ix.map
        })
    }
}

/// Ground facts grouped into per-predicate relations over interned symbols.
#[derive(Debug, Clone, Default)]
pub struct FactStore {
    pub(crate) symbols: SymbolTable,
    preds: Vec<Pred>,
    pred_ids: HashMap<Pred, PredId>,
    pub(crate) relations: Vec<Relation>,
    generation: u64,
}

impl FactStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_facts<'a>(facts: impl IntoIterator<Item = &'a Fact>) -> Result<Self, EngineError> {
        let mut s = Self::new();
        s.assert_facts(facts)?;
        Ok(s)
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub(crate) fn pred_id(&mut self, pred: &Pred) -> PredId {
        if let Some(&id) = self.pred_ids.get(pred) {
            return id;
        }
        let id = self.preds.len();
        self.preds.push(pred.clone());
        self.pred_ids.insert(pred.clone(), id);
        self.relations.push(Relation::new(pred.arity()));
        id
    }

    pub(crate) fn lookup_pred(&self, pred: &Pred) -> Option<PredId> {
        self.pred_ids.get(pred).copied()
    }

    pub(crate) fn pred(&self, id: PredId) -> &Pred {
        &self.preds[id]
    }

    pub fn relation(&self, pred: &Pred) -> Option<&Relation> {
        self.lookup_pred(pred).map(|id| &self.relations[id])
    }

    /// Inserts ground facts; returns how many were new.
    pub fn assert_facts<'a>(
        &mut self,
        facts: impl IntoIterator<Item = &'a Fact>,
    ) -> Result<usize, EngineError> {
        let mut added = 0;
        for f in facts {
            if f.args.len() != f.pred.arity() {
                return Err(EngineError::ArityMismatch {
                    pred: f.pred.name().to_string(),
                    expected: f.pred.arity(),
                    got: f.args.len(),
                });
            }
            let id = self.pred_id(&f.pred);
            let t: Tuple = f.args.iter().map(|e| self.symbols.intern(e)).collect();
            if self.relations[id].rows.insert(t) {
                added += 1;
            }
        }
        if added > 0 {
            self.generation += 1;
        }
        Ok(added)
    }

    pub(crate) fn insert_tuple(&mut self, pred: PredId, t: Tuple) -> bool {
        self.relations[pred].rows.insert(t)
    }

    pub(crate) fn bump_generation(&mut self) {
        self.generation += 1;
    }

    pub fn contains(&self, f: &Fact) -> bool {
        let Some(rel) = self.relation(&f.pred) else {
            return false;
        };
        let t: Option<Vec<Sym>> = f.args.iter().map(|e| self.symbols.get(e)).collect();
        t.is_some_and(|t| rel.contains(&t))
    }

    pub fn len(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Facts of one predicate, unsorted.
    pub fn facts_of(&self, pred: &Pred) -> Vec<Fact> {
        let Some(id) = self.lookup_pred(pred) else {
            return Vec::new();
        };
        self.relations[id]
            .rows
            .iter()
            .map(|t| Fact {
                pred: pred.clone(),
                args: t.iter().map(|&s| self.symbols.resolve(s).clone()).collect(),
            })
            .collect()
    }

    /// Every fact, in canonical order.
    pub fn facts(&self) -> Vec<Fact> {
        let mut all: Vec<Fact> = self.preds.iter().flat_map(|p| self.facts_of(p)).collect();
        all.sort();
        all
    }

    /// Canonical sorted `.dl` dump.
    pub fn to_dl(&self) -> String {
        facts_to_dl(&self.facts())
    }

    pub fn verify_indexes(&self) -> bool {
        self.relations.iter().all(Relation::verify_indexes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Builtin;

    fn e(s: &str) -> Entity {
        Entity::new(&format!("http://ex/{s}")).unwrap()
    }

    #[test]
    fn duplicate_facts_are_ignored() {
        let f = Fact::new(Builtin::Instc, vec![e("a"), e("b")]).unwrap();
        let mut s = FactStore::new();
        assert_eq!(s.assert_facts([&f]).unwrap(), 1);
        assert_eq!(s.assert_facts([&f]).unwrap(), 0);
        assert_eq!(s.len(), 1);
        assert!(s.contains(&f));
    }

    #[test]
    fn empty_insert_leaves_store_unchanged() {
        let mut s = FactStore::new();
        assert_eq!(s.assert_facts(std::iter::empty()).unwrap(), 0);
        assert!(s.is_empty());
        assert_eq!(s.generation(), 0);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let bad = Fact {
            pred: Pred::Builtin(Builtin::Instc),
            args: vec![e("a")],
        };
        assert!(matches!(
            FactStore::new().assert_facts([&bad]),
            Err(EngineError::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn indexes_follow_later_inserts() {
        let mut s = FactStore::new();
        let p = Pred::Builtin(Builtin::IsacCC);
        s.assert_facts([&Fact::new(Builtin::IsacCC, vec![e("a"), e("b")]).unwrap()])
            .unwrap();
        let id = s.lookup_pred(&p).unwrap();
        let a = s.symbols.get(&e("a")).unwrap();
        assert_eq!(s.relations[id].index(0b01).get(&[a]).len(), 1);
        s.assert_facts([&Fact::new(Builtin::IsacCC, vec![e("a"), e("c")]).unwrap()])
            .unwrap();
        assert_eq!(s.relations[id].index(0b01).get(&[a]), &[0, 1]);
        assert!(s.verify_indexes());
    }
}
