//! End-to-end reasoning: parse, normalize, translate, saturate, answer.

use std::sync::Arc;

use thiserror::Error;
use web_time::Instant;

use crate::engine::{
    answer_conjunctive_query, answer_with_demand, evaluate_fixpoint_with, EngineError, EvalOptions,
    EvalStats, FactStore,
};
use crate::model::{Atom, Builtin, ConjunctiveQuery, Entity, Rule};
use crate::owl::{normalize_ontology, parse_ontology, Ontology, OwlError};
use crate::rules::builtin_rules;
use crate::sparql::{to_conjunctive, SparqlError, SparqlQuery};
use crate::translate::{translate_ontology, FactBase, TranslateError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Owl(#[from] OwlError),
    #[error(transparent)]
    Sparql(#[from] SparqlError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReasonerOptions {
    pub threads: usize,
    /// Evaluate each query through the magic-sets rewriting instead of
    /// materializing the whole model.
    pub demand: bool,
    pub check_consistency: bool,
}

impl Default for ReasonerOptions {
    fn default() -> Self {
        ReasonerOptions {
            threads: 1,
            demand: false,
            check_consistency: false,
        }
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub load_ms: f64,
    pub translate_ms: f64,
    pub saturate_ms: f64,
    pub answer_ms: f64,
}

impl Timings {
    pub fn total_ms(&self) -> f64 {
        self.load_ms + self.translate_ms + self.saturate_ms + self.answer_ms
    }
}

#[derive(Debug, Clone)]
pub struct QueryOutcome {
    pub vars: Vec<Arc<str>>,
    pub rows: Vec<Vec<Entity>>,
    pub stats: EvalStats,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// A translated ontology, saturated on first use unless running in demand mode.
pub struct Reasoner {
    opts: ReasonerOptions,
    ontology: Ontology,
    facts: FactBase,
    base: FactStore,
    model: Option<(FactStore, EvalStats)>,
    rules: Vec<Rule>,
    pub timings: Timings,
}

impl Reasoner {
    pub fn from_text(text: &str, opts: ReasonerOptions) -> Result<Self, PipelineError> {
        let t = Instant::now();
        let o = parse_ontology(text)?;
        let load_ms = ms(t);
        let mut r = Self::from_ontology(&o, opts)?;
        r.timings.load_ms = load_ms;
        Ok(r)
    }

    pub fn from_ontology(o: &Ontology, opts: ReasonerOptions) -> Result<Self, PipelineError> {
        let t = Instant::now();
        let ontology = normalize_ontology(o);
        let facts = translate_ontology(&ontology)?;
        let base = FactStore::from_facts(&facts.facts())?;
        let catalogue = if opts.check_consistency {
            builtin_rules().with_violation_rules()
        } else {
            builtin_rules().clone()
        };
        let rules = catalogue.iter().map(|(r, _)| r.clone()).collect();
        Ok(Reasoner {
            opts,
            ontology,
            facts,
            base,
            model: None,
            rules,
            timings: Timings {
                translate_ms: ms(t),
                ..Timings::default()
            },
        })
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn facts(&self) -> &FactBase {
        &self.facts
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            threads: self.opts.threads,
        }
    }

    /// The full minimal model, computed once.
    pub fn saturate(&mut self) -> &(FactStore, EvalStats) {
        if self.model.is_none() {
            let t = Instant::now();
            let out = evaluate_fixpoint_with(self.base.clone(), &self.rules, &self.eval_options());
            self.timings.saturate_ms = ms(t);
            self.model = Some(out);
        }
        self.model.as_ref().expect("just computed")
    }

    /// `Some(false)` when a violation is derivable; `None` unless consistency
    /// checking was requested.
    pub fn consistent(&mut self) -> Result<Option<bool>, PipelineError> {
        if !self.opts.check_consistency {
            return Ok(None);
        }
        let q = ConjunctiveQuery::new(
            vec![],
            vec![Atom::new(Builtin::Violation, vec![]).expect("nullary")],
        )
        .expect("no answer variables");
        let rows = self.answer_conjunctive(&q)?.rows;
        Ok(Some(rows.is_empty()))
    }

    pub fn answer(&mut self, q: &SparqlQuery) -> Result<QueryOutcome, PipelineError> {
        let cq = to_conjunctive(q)?;
        self.answer_conjunctive(&cq)
    }

    pub fn answer_conjunctive(
        &mut self,
        q: &ConjunctiveQuery,
    ) -> Result<QueryOutcome, PipelineError> {
        if self.opts.demand {
            let t = Instant::now();
            let (rows, stats) =
                answer_with_demand(&self.base, &self.rules, q, &self.eval_options())?;
            self.timings.answer_ms = ms(t);
            return Ok(QueryOutcome {
                vars: q.answer_vars.clone(),
                rows,
                stats,
            });
        }
        self.saturate();
        let (model, stats) = self.model.as_ref().expect("saturated");
        let t = Instant::now();
        let rows = answer_conjunctive_query(model, q)?;
        self.timings.answer_ms = ms(t);
        Ok(QueryOutcome {
            vars: q.answer_vars.clone(),
            rows,
            stats: stats.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparql::parse_query;

    const EAGLES: &str = "Prefix(:=<http://example.org/zoo#>)\n\
        Ontology(\n\
        SubClassOf(:Eagle :Birds)\n\
        SubClassOf(:GoldenEagle :Eagle)\n\
        ClassAssertion(:GoldenEagle :Harry)\n\
        ClassAssertion(:EndangeredSpecies :GoldenEagle)\n\
        ObjectPropertyAssertion(:Lives_in :Harry :CPZ)\n\
        )\n";

    const QUERY: &str = "PREFIX : <http://example.org/zoo#>\n\
        SELECT ?z WHERE { ?y a :EndangeredSpecies . ?z a ?y . ?z :Lives_in :CPZ }";

    fn zoo(s: &str) -> Entity {
        Entity::new(&format!("http://example.org/zoo#{s}")).unwrap()
    }

    #[test]
    fn endangered_meta_query_in_both_modes() {
        let q = parse_query(QUERY).unwrap();
        for demand in [false, true] {
            let opts = ReasonerOptions {
                demand,
                ..ReasonerOptions::default()
            };
            let mut r = Reasoner::from_text(EAGLES, opts).unwrap();
            let out = r.answer(&q).unwrap();
            assert_eq!(out.rows, vec![vec![zoo("Harry")]]);
        }
    }

    #[test]
    fn consistency_check_reports_violations() {
        let bad = "Prefix(:=<http://example.org/zoo#>)\nOntology(\n\
                   DisjointClasses(:A :B)\nClassAssertion(:A :x)\nClassAssertion(:B :x)\n)";
        for demand in [false, true] {
            let opts = ReasonerOptions {
                demand,
                check_consistency: true,
                ..ReasonerOptions::default()
            };
            let mut r = Reasoner::from_text(bad, opts).unwrap();
            assert_eq!(r.consistent().unwrap(), Some(false));
            let mut ok = Reasoner::from_text(EAGLES, opts).unwrap();
            assert_eq!(ok.consistent().unwrap(), Some(true));
        }
    }
}
