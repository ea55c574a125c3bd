//! Bottom-up Datalog evaluation over interned fact stores.

mod join;
mod magic;
mod naive;
mod query;
mod seminaive;
mod store;

use std::collections::BTreeMap;

use thiserror::Error;

pub use magic::{answer_with_demand, magic_transform, MagicProgram};
pub use naive::naive_evaluate;
pub use query::answer_conjunctive_query;
pub use seminaive::{evaluate_fixpoint, evaluate_fixpoint_with, EvalOptions};
pub use store::{FactStore, Relation, Sym, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("predicate {pred} expects {expected} arguments, got {got}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        got: usize,
    },
    #[error("answer variable {0} does not occur in the query body")]
    UnsafeQuery(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
}

/// Counters collected by one fixpoint computation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalStats {
    pub rounds: usize,
    /// New facts per round; the last entry is 0 once a fixpoint is reached.
    pub per_round: Vec<usize>,
    /// New facts per predicate name, excluding the input.
    pub facts_derived: BTreeMap<String, usize>,
    pub wall_ms: f64,
}

impl EvalStats {
    pub fn total_derived(&self) -> usize {
        self.per_round.iter().sum()
    }
}
